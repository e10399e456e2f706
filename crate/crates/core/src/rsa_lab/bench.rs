//! Timing harness: factor random semiprimes of growing size and fit the
//! median times against the NFS exponent shape.

use std::time::Instant;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::factor::{find_factor, FactorAlgorithm};
use super::primes::random_prime_pair;
use crate::effort::{l_effort, BitLength};
use crate::error::{Error, Result};
use crate::stats::{linear_fit, median};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkSample {
    pub bits: u32,
    pub trial: u32,
    pub algorithm: FactorAlgorithm,
    pub wall_seconds: f64,
    /// The work budget ran out before a factor was found.
    pub timeout: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeMedian {
    pub bits: u32,
    pub median_seconds: f64,
    pub completed: usize,
}

/// `ln(median seconds) = intercept + slope * ln L(bits)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub algorithm: FactorAlgorithm,
    pub trials: u32,
    pub samples: Vec<BenchmarkSample>,
    pub medians: Vec<SizeMedian>,
    /// `None` with fewer than two sizes that produced timings.
    pub fit: Option<GrowthFit>,
    pub timeouts: usize,
}

/// Summary written next to the per-sample CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkSummary {
    pub slope: Option<f64>,
    pub r2: Option<f64>,
    pub sizes: Vec<u32>,
    pub trials: u32,
}

impl BenchmarkReport {
    pub fn summary(&self) -> BenchmarkSummary {
        BenchmarkSummary {
            slope: self.fit.map(|f| f.slope),
            r2: self.fit.map(|f| f.r2),
            sizes: self.medians.iter().map(|m| m.bits).collect(),
            trials: self.trials,
        }
    }

    /// `bits,trial,algorithm,wall_seconds,timeout` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bits,trial,algorithm,wall_seconds,timeout\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{:.9e},{}\n",
                s.bits, s.trial, s.algorithm, s.wall_seconds, s.timeout
            ));
        }
        out
    }
}

/// Largest size each algorithm is expected to handle at desk scale.
pub fn desk_scale_limit(algorithm: FactorAlgorithm) -> u32 {
    match algorithm {
        FactorAlgorithm::TrialDivision | FactorAlgorithm::Fermat => 56,
        FactorAlgorithm::PollardRho => 128,
    }
}

/// Per-trial generator seed, independent of execution order.
pub fn trial_seed(seed: u64, bits: u32, trial: u32) -> u64 {
    // splitmix64 finaliser over the packed inputs
    let mut z = seed ^ (u64::from(bits) << 32 | u64::from(trial)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The semiprime factored in trial `trial` at size `bits`.
pub fn trial_semiprime(seed: u64, bits: u32, trial: u32) -> BigUint {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, bits, trial));
    let (p, q) = random_prime_pair(&mut rng, bits);
    p * q
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchConfig {
    pub trials: u32,
    pub algorithm: FactorAlgorithm,
    pub seed: u64,
    /// Iteration budget per factorization; exceeding it marks a timeout.
    pub budget: Option<u64>,
}

pub fn benchmark_factoring(sizes: &[BitLength], config: &BenchConfig) -> Result<BenchmarkReport> {
    if config.trials == 0 {
        return Err(Error::input("trials_per_size must be positive"));
    }
    if let Some(b) = sizes.iter().find(|b| b.get() < 8) {
        return Err(Error::input(format!("benchmark sizes must be at least 8 bits, got {b}")));
    }
    let mut samples = Vec::new();
    let mut medians = Vec::new();
    for &size in sizes {
        let bits = size.get();
        let mut times = Vec::new();
        for trial in 0..config.trials {
            let n = trial_semiprime(config.seed, bits, trial);
            let started = Instant::now();
            let outcome = find_factor(&n, config.algorithm, trial_seed(config.seed, bits, trial), config.budget);
            let wall_seconds = started.elapsed().as_secs_f64();
            let timeout = match outcome {
                Ok(f) => {
                    debug_assert!(num_traits::Zero::is_zero(&(&n % &f)));
                    false
                }
                Err(Error::BudgetExceeded(_)) => true,
                Err(e) => return Err(e),
            };
            if !timeout {
                times.push(wall_seconds);
            }
            samples.push(BenchmarkSample {
                bits,
                trial,
                algorithm: config.algorithm,
                wall_seconds,
                timeout,
            });
        }
        if let Some(m) = median(&times) {
            medians.push(SizeMedian {
                bits,
                median_seconds: m,
                completed: times.len(),
            });
        }
    }

    let xs: Vec<f64> = medians
        .iter()
        .map(|m| l_effort(BitLength::new(m.bits).expect("validated")).ln())
        .collect();
    // guard ln(0) on coarse clocks
    let ys: Vec<f64> = medians.iter().map(|m| m.median_seconds.max(1e-9).ln()).collect();
    let fit = linear_fit(&xs, &ys).map(|f| GrowthFit {
        slope: f.slope,
        intercept: f.intercept,
        r2: f.r_squared,
    });
    let timeouts = samples.iter().filter(|s| s.timeout).count();
    Ok(BenchmarkReport {
        algorithm: config.algorithm,
        trials: config.trials,
        samples,
        medians,
        fit,
        timeouts,
    })
}
