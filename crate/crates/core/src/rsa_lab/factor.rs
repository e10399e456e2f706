//! Desk-scale factoring oracles: trial division, Fermat's method and
//! Pollard's rho (Brent's cycle variant).

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::primes::{gcd, is_prime};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorAlgorithm {
    TrialDivision,
    Fermat,
    PollardRho,
}

impl FactorAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::TrialDivision => "trial_division",
            Self::Fermat => "fermat",
            Self::PollardRho => "pollard_rho",
        }
    }
}

impl fmt::Display for FactorAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FactorAlgorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trial_division" | "trial" => Ok(Self::TrialDivision),
            "fermat" => Ok(Self::Fermat),
            "pollard_rho" | "rho" => Ok(Self::PollardRho),
            other => Err(Error::input(format!("unknown factoring algorithm {other:?}"))),
        }
    }
}

fn budget_check(used: u64, budget: Option<u64>, what: &str) -> Result<()> {
    match budget {
        Some(b) if used > b => Err(Error::BudgetExceeded(format!("{what} after {b} iterations"))),
        _ => Ok(()),
    }
}

/// Smallest prime factor of `n >= 2`; equals `n` exactly when `n` is prime.
pub fn trial_division(n: &BigUint) -> Result<BigUint> {
    trial_division_bounded(n, None)
}

/// [`trial_division`] that gives up after `max_candidates` trial divisors.
pub fn trial_division_bounded(n: &BigUint, max_candidates: Option<u64>) -> Result<BigUint> {
    if n < &BigUint::from(2u32) {
        return Err(Error::input("trial division needs n >= 2"));
    }
    for p in [2u32, 3] {
        if (n % p).is_zero() {
            return Ok(BigUint::from(p));
        }
    }
    let limit = n.sqrt();
    let mut used = 0u64;
    // candidates 6k - 1, 6k + 1
    let mut k = 6u64;
    loop {
        for d in [k - 1, k + 1] {
            if BigUint::from(d) > limit {
                return Ok(n.clone());
            }
            if (n % d).is_zero() {
                return Ok(BigUint::from(d));
            }
        }
        used += 2;
        budget_check(used, max_candidates, "trial division")?;
        k += 6;
    }
}

/// A nontrivial factor by Fermat's difference-of-squares method, best when the
/// two factors are close. Errors for primes and for `n < 4`.
pub fn fermat(n: &BigUint, max_steps: Option<u64>) -> Result<BigUint> {
    if n < &BigUint::from(4u32) {
        return Err(Error::NoFactor(format!("{n} has no nontrivial factor")));
    }
    if (n % 2u32).is_zero() {
        return Ok(BigUint::from(2u32));
    }
    if is_prime(n) {
        return Err(Error::NoFactor(format!("{n} is prime")));
    }
    let mut a = n.sqrt();
    if &(&a * &a) < n {
        a += 1u32;
    }
    let mut used = 0u64;
    loop {
        let b2 = &a * &a - n;
        let b = b2.sqrt();
        if &b * &b == b2 {
            // n composite and odd, so a - b > 1 before a reaches (n + 1) / 2
            return Ok(&a - &b);
        }
        a += 1u32;
        used += 1;
        budget_check(used, max_steps, "fermat")?;
    }
}

/// Tuning for [`pollard_rho_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoConfig {
    /// Polynomial restarts before falling back to trial division.
    pub max_restarts: u32,
    /// Total iteration budget over every restart; `None` is unbounded.
    pub max_iterations: Option<u64>,
    /// Trial divisors allowed in the fallback; `None` runs it to completion.
    pub fallback_candidates: Option<u64>,
}

impl Default for RhoConfig {
    fn default() -> Self {
        Self {
            max_restarts: 16,
            max_iterations: None,
            fallback_candidates: None,
        }
    }
}

/// Nontrivial factor of composite `n`, deterministic in `seed`.
pub fn pollard_rho(n: &BigUint, seed: u64) -> Result<BigUint> {
    pollard_rho_with(n, seed, &RhoConfig::default())
}

pub fn pollard_rho_with(n: &BigUint, seed: u64, config: &RhoConfig) -> Result<BigUint> {
    if n < &BigUint::from(4u32) {
        return Err(Error::NoFactor(format!("{n} has no nontrivial factor")));
    }
    if (n % 2u32).is_zero() {
        return Ok(BigUint::from(2u32));
    }
    if is_prime(n) {
        return Err(Error::NoFactor(format!("{n} is prime")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = BigUint::one();
    let mut used = 0u64;
    let mut c = rng.gen_biguint_range(&one, n);
    for _ in 0..=config.max_restarts {
        let y0 = rng.gen_biguint_below(n);
        if let Some(f) = brent_attempt(n, &y0, &c, &mut used, config.max_iterations)? {
            return Ok(f);
        }
        c = (c + 1u32) % n;
        if c.is_zero() {
            c = one.clone();
        }
    }
    trial_division_bounded(n, config.fallback_candidates)
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a > b {
        a - b
    } else {
        b - a
    }
}

/// One run of Brent's cycle search on `y -> y^2 + c mod n`. `Ok(None)` means
/// the cycle closed without exposing a factor.
fn brent_attempt(
    n: &BigUint,
    y0: &BigUint,
    c: &BigUint,
    used: &mut u64,
    budget: Option<u64>,
) -> Result<Option<BigUint>> {
    const BATCH: u64 = 64;
    let step = |y: &BigUint| (y * y + c) % n;

    let mut y = y0.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut r = 1u64;

    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = BATCH.min(r - k);
            for _ in 0..batch {
                y = step(&y);
                q = (q * abs_diff(&x, &y)) % n;
            }
            g = gcd(&q, n);
            k += batch;
            *used += batch;
            budget_check(*used, budget, "pollard rho")?;
        }
        r *= 2;
    }

    if &g == n {
        // batched product hit zero; replay the last batch one step at a time
        loop {
            ys = step(&ys);
            g = gcd(&abs_diff(&x, &ys), n);
            if !g.is_one() {
                break;
            }
        }
    }
    Ok((&g != n).then_some(g))
}

/// Finds one nontrivial factor with the named algorithm.
pub fn find_factor(
    n: &BigUint,
    algorithm: FactorAlgorithm,
    seed: u64,
    budget: Option<u64>,
) -> Result<BigUint> {
    match algorithm {
        FactorAlgorithm::TrialDivision => {
            let f = trial_division_bounded(n, budget)?;
            if &f == n {
                Err(Error::NoFactor(format!("{n} is prime")))
            } else {
                Ok(f)
            }
        }
        FactorAlgorithm::Fermat => fermat(n, budget),
        FactorAlgorithm::PollardRho => pollard_rho_with(
            n,
            seed,
            &RhoConfig {
                max_iterations: budget,
                fallback_candidates: budget,
                ..RhoConfig::default()
            },
        ),
    }
}

/// Prime factors of `n >= 1` in ascending order, with multiplicity, by
/// repeated trial division.
pub fn factorize_trial(n: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut m = n.clone();
    while m > BigUint::one() {
        let p = trial_division(&m).expect("m >= 2");
        m /= &p;
        out.push(p);
    }
    out
}

/// Prime factors of `n >= 1` in ascending order, with multiplicity, by
/// recursive Pollard rho splitting.
pub fn factorize_rho(n: &BigUint, seed: u64) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut m = n.clone();
    let tz = m.trailing_zeros().unwrap_or(0);
    out.extend(std::iter::repeat_n(BigUint::from(2u32), tz as usize));
    m >>= tz;
    let mut stack = vec![m];
    let mut calls = 0u64;
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            out.push(m);
            continue;
        }
        calls += 1;
        let f = pollard_rho(&m, seed.wrapping_add(calls)).expect("composite input");
        let cofactor = &m / &f;
        stack.push(f);
        stack.push(cofactor);
    }
    out.sort();
    out
}

/// Convenience for machine-sized inputs.
pub fn factor_u64(n: u64) -> Vec<u64> {
    factorize_rho(&BigUint::from(n), 0)
        .iter()
        .map(|p| p.to_u64().expect("factor of a u64"))
        .collect()
}
