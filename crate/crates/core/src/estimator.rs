//! Break-time projection, minimum bit-length search, and the tabulated
//! security-level and policy presets.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::effort::{effort_ratio, l_effort, BitLength};
use crate::error::{Error, Result};
use crate::magnitude::LogMagnitude;
use crate::moore::{months_between, CalendarDate, DoublingModel};

/// Hours per year used for every conversion.
pub const HOURS_PER_YEAR: f64 = 8760.0;
pub const HOURS_PER_MONTH: f64 = HOURS_PER_YEAR / 12.0;

/// Conventional modulus sizes a raw minimum can be rounded up to.
pub const CONVENTIONAL_SIZES: [u32; 10] = [512, 768, 1024, 1536, 2048, 3072, 4096, 7680, 8192, 15360];

/// A measured factoring run that anchors the projections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineRecord {
    pub bits: BitLength,
    pub wall_hours: f64,
    pub date: CalendarDate,
}

impl BaselineRecord {
    pub fn new(bits: BitLength, wall_hours: f64, date: CalendarDate) -> Result<Self> {
        if !(wall_hours.is_finite() && wall_hours > 0.0) {
            return Err(Error::input(format!(
                "baseline wall_hours must be positive, got {wall_hours}"
            )));
        }
        Ok(Self {
            bits,
            wall_hours,
            date,
        })
    }

    /// RSA-512 factored in about four hours of cloud time in 2015.
    pub fn rsa512_2015() -> Self {
        Self {
            bits: BitLength::new(512).expect("valid"),
            wall_hours: 4.0,
            date: CalendarDate::year_start(2015).expect("valid"),
        }
    }

    /// `ln` of the hours needed for `target` bits, `elapsed_months` after the baseline.
    fn ln_hours(&self, target: BitLength, model: DoublingModel, elapsed_months: f64) -> f64 {
        self.wall_hours.ln() + effort_ratio(target, self.bits).ln()
            - model.doublings(elapsed_months) * LN_2
    }
}

/// Projected wall-clock time to factor a modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakEstimate {
    pub bits: BitLength,
    /// `None` for estimates not tied to a calendar date.
    pub at_date: Option<CalendarDate>,
    hours: LogMagnitude,
}

impl BreakEstimate {
    pub fn hours_magnitude(&self) -> LogMagnitude {
        self.hours
    }

    /// Linear hours; infinite once beyond `f64` range.
    pub fn hours(&self) -> f64 {
        self.hours.value_lossy()
    }

    pub fn years(&self) -> f64 {
        self.hours() / HOURS_PER_YEAR
    }

    pub fn minutes(&self) -> f64 {
        self.hours() * 60.0
    }

    pub fn log10_hours(&self) -> f64 {
        self.hours.log10()
    }

    pub fn years_magnitude(&self) -> LogMagnitude {
        self.hours.scale(1.0 / HOURS_PER_YEAR)
    }
}

/// Hours to factor `target` bits at date `at`: the baseline time scaled by the
/// effort ratio and divided by the compute growth since the baseline date.
pub fn break_time(
    target: BitLength,
    at: CalendarDate,
    baseline: &BaselineRecord,
    model: DoublingModel,
) -> BreakEstimate {
    let elapsed = months_between(baseline.date, at);
    BreakEstimate {
        bits: target,
        at_date: Some(at),
        hours: LogMagnitude::from_ln(baseline.ln_hours(target, model, elapsed)),
    }
}

/// Undated estimates for 768, 1024 and 2048 bits assuming RSA-512 took
/// `baseline_minutes`, under present conditions (no compute growth).
pub fn table8_estimates(baseline_minutes: f64) -> Result<Vec<BreakEstimate>> {
    estimates_from_minutes(baseline_minutes, &[768, 1024, 2048])
}

pub(crate) fn estimates_from_minutes(baseline_minutes: f64, bits: &[u32]) -> Result<Vec<BreakEstimate>> {
    if !(baseline_minutes.is_finite() && baseline_minutes > 0.0) {
        return Err(Error::input("baseline minutes must be positive"));
    }
    let base = BitLength::new(512)?;
    bits.iter()
        .map(|&b| {
            let target = BitLength::new(b)?;
            let ln_minutes = baseline_minutes.ln() + effort_ratio(target, base).ln();
            Ok(BreakEstimate {
                bits: target,
                at_date: None,
                hours: LogMagnitude::from_ln(ln_minutes - 60f64.ln()),
            })
        })
        .collect()
}

/// How the attacker's compute is accounted over the protection lifespan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HorizonMode {
    /// Break time is evaluated with the compute available when protection expires.
    #[default]
    EndOfLife,
    /// The attacker works for the whole lifespan with compute that keeps doubling.
    CumulativeWork,
}

impl FromStr for HorizonMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "end-of-life" => Ok(Self::EndOfLife),
            "cumulative-work" => Ok(Self::CumulativeWork),
            other => Err(Error::input(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for HorizonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::EndOfLife => "end-of-life",
            Self::CumulativeWork => "cumulative-work",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecurityQuery {
    pub protect_from: CalendarDate,
    pub lifespan_years: f64,
    pub margin: f64,
    pub mode: HorizonMode,
}

impl SecurityQuery {
    /// A zero lifespan is accepted and trivially satisfied by the smallest bit length.
    pub fn new(protect_from: CalendarDate, lifespan_years: f64) -> Result<Self> {
        Self {
            protect_from,
            lifespan_years,
            margin: 1.0,
            mode: HorizonMode::EndOfLife,
        }
        .validated()
    }

    pub fn with_margin(mut self, margin: f64) -> Result<Self> {
        self.margin = margin;
        self.validated()
    }

    pub fn with_mode(mut self, mode: HorizonMode) -> Self {
        self.mode = mode;
        self
    }

    fn validated(self) -> Result<Self> {
        if !(self.lifespan_years.is_finite() && self.lifespan_years >= 0.0) {
            return Err(Error::input("lifespan_years must be non-negative"));
        }
        if !(self.margin.is_finite() && self.margin > 0.0) {
            return Err(Error::input("margin must be positive"));
        }
        Ok(self)
    }

    /// Lifespan at month resolution.
    pub fn lifespan_months(&self) -> i64 {
        (self.lifespan_years * 12.0).round() as i64
    }

    pub fn end_of_life(&self) -> Result<CalendarDate> {
        self.protect_from.add_months(self.lifespan_months())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinBitsOutcome {
    /// Smallest bit length meeting the query.
    pub bits: BitLength,
    /// `bits` rounded up to the next entry of [`CONVENTIONAL_SIZES`], if any.
    pub rounded: Option<BitLength>,
    /// Break estimate for `bits` at the end of the lifespan.
    pub evidence: BreakEstimate,
    /// Total attacker work over the lifespan (cumulative mode only).
    pub attacker_work: Option<LogMagnitude>,
}

/// Rounds up to the next conventional modulus size.
pub fn round_to_conventional(bits: BitLength) -> Option<BitLength> {
    CONVENTIONAL_SIZES
        .iter()
        .find(|&&s| s >= bits.get())
        .map(|&s| BitLength::new(s).expect("table sizes are valid"))
}

/// Whether `bits` satisfies `q`; exposed for oracle checks.
pub fn satisfies(
    bits: BitLength,
    q: &SecurityQuery,
    baseline: &BaselineRecord,
    model: DoublingModel,
) -> Result<bool> {
    Ok(Constraint::new(q, baseline, model)?.holds(bits))
}

struct Constraint<'a> {
    baseline: &'a BaselineRecord,
    model: DoublingModel,
    elapsed_at_end: f64,
    kind: ConstraintKind,
}

enum ConstraintKind {
    Trivial,
    /// `ln hours(B) >= threshold`
    MinLnHours(f64),
    /// `ln L(B) > threshold`
    MinLnEffort(f64),
}

impl<'a> Constraint<'a> {
    fn new(q: &SecurityQuery, baseline: &'a BaselineRecord, model: DoublingModel) -> Result<Self> {
        let end = q.end_of_life()?;
        let elapsed_at_end = months_between(baseline.date, end);
        let lifespan_months = q.lifespan_months() as f64;
        let kind = if lifespan_months == 0.0 {
            ConstraintKind::Trivial
        } else {
            match q.mode {
                HorizonMode::EndOfLife => ConstraintKind::MinLnHours(
                    (q.margin * q.lifespan_years * HOURS_PER_YEAR).ln(),
                ),
                HorizonMode::CumulativeWork => {
                    let start = months_between(baseline.date, q.protect_from);
                    ConstraintKind::MinLnEffort(
                        q.margin.ln() + ln_cumulative_work(baseline, model, start, lifespan_months),
                    )
                }
            }
        };
        Ok(Self {
            baseline,
            model,
            elapsed_at_end,
            kind,
        })
    }

    fn holds(&self, bits: BitLength) -> bool {
        match self.kind {
            ConstraintKind::Trivial => true,
            ConstraintKind::MinLnHours(t) => {
                self.baseline.ln_hours(bits, self.model, self.elapsed_at_end) >= t
            }
            ConstraintKind::MinLnEffort(t) => l_effort(bits).ln() > t,
        }
    }
}

/// `ln` of the operations an attacker performs between `start_months` and
/// `start_months + span_months` (both relative to the baseline date), when the
/// baseline run's rate `L(bits) / wall_hours` doubles every model period:
/// `rate0 * P / ln2 * 2^(t1/P) * (2^(span/P) - 1)`, with times in hours.
fn ln_cumulative_work(
    baseline: &BaselineRecord,
    model: DoublingModel,
    start_months: f64,
    span_months: f64,
) -> f64 {
    let ln_rate0 = l_effort(baseline.bits).ln() - baseline.wall_hours.ln();
    let period_hours = model.period_months() * HOURS_PER_MONTH;
    ln_rate0 + (period_hours / LN_2).ln()
        + model.doublings(start_months) * LN_2
        + (model.doublings(span_months) * LN_2).exp_m1().ln()
}

/// Smallest bit length whose projected break time covers the query's lifespan.
///
/// Break time is strictly increasing in bit length, so the predicate is
/// monotone and a binary search over `[2, 1_000_000]` finds the boundary.
pub fn min_bitlength(
    q: &SecurityQuery,
    baseline: &BaselineRecord,
    model: DoublingModel,
) -> Result<MinBitsOutcome> {
    let constraint = Constraint::new(q, baseline, model)?;
    let mut lo = BitLength::MIN;
    let mut hi = BitLength::MAX;
    if !constraint.holds(BitLength::new(hi)?) {
        return Err(Error::Unsatisfiable(format!(
            "no bit length up to {hi} protects {} years from {}",
            q.lifespan_years, q.protect_from
        )));
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if constraint.holds(BitLength::new(mid)?) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let bits = BitLength::new(lo)?;
    let end = q.end_of_life()?;
    let attacker_work = match (q.mode, q.lifespan_months()) {
        (HorizonMode::CumulativeWork, m) if m > 0 => Some(LogMagnitude::from_ln(
            ln_cumulative_work(baseline, model, months_between(baseline.date, q.protect_from), m as f64),
        )),
        _ => None,
    };
    Ok(MinBitsOutcome {
        bits,
        rounded: round_to_conventional(bits),
        evidence: break_time(bits, end, baseline, model),
        attacker_work,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CryptoFamily {
    /// Integer factorization (RSA).
    Rsa,
    /// Discrete logarithm (DH, DSA, Elgamal).
    DiscreteLog,
    /// Elliptic curves (ECDH, ECDSA).
    EllipticCurve,
    /// Symmetric ciphers (AES, 3DES).
    Symmetric,
}

impl CryptoFamily {
    pub const ALL: [CryptoFamily; 4] = [
        CryptoFamily::Rsa,
        CryptoFamily::DiscreteLog,
        CryptoFamily::EllipticCurve,
        CryptoFamily::Symmetric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Rsa => "rsa",
            Self::DiscreteLog => "dl",
            Self::EllipticCurve => "ecc",
            Self::Symmetric => "symmetric",
        }
    }

    fn sizes(self) -> [u32; 4] {
        match self {
            Self::Rsa | Self::DiscreteLog => [1024, 3072, 7680, 15360],
            Self::EllipticCurve => [160, 256, 384, 512],
            Self::Symmetric => [80, 128, 192, 256],
        }
    }
}

impl FromStr for CryptoFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rsa" => Ok(Self::Rsa),
            "dl" | "dh" | "dsa" | "elgamal" => Ok(Self::DiscreteLog),
            "ecc" | "ec" | "ecdh" | "ecdsa" => Ok(Self::EllipticCurve),
            "symmetric" | "aes" | "3des" => Ok(Self::Symmetric),
            other => Err(Error::input(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for CryptoFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tabulated security levels, in bits.
pub const SECURITY_LEVELS: [u32; 4] = [80, 128, 192, 256];

/// Key size required by `family` for `level_bits` of security.
pub fn security_level_lookup(family: CryptoFamily, level_bits: u32) -> Result<BitLength> {
    let idx = SECURITY_LEVELS
        .iter()
        .position(|&l| l == level_bits)
        .ok_or_else(|| {
            Error::input(format!(
                "security level {level_bits} not tabulated (expected one of 80, 128, 192, 256)"
            ))
        })?;
    BitLength::new(family.sizes()[idx])
}

/// Highest tabulated level whose required key size `key_bits` meets, or
/// `None` when it falls below the smallest tabulated size.
pub fn security_level_for_key(family: CryptoFamily, key_bits: u32) -> Option<u32> {
    family
        .sizes()
        .iter()
        .zip(SECURITY_LEVELS)
        .filter(|(&size, _)| key_bits >= size)
        .map(|(_, level)| level)
        .next_back()
}

/// Last year covered by the 2048-bit minimum; later use calls for 3072 bits.
pub const POLICY_2048_UNTIL: i32 = 2030;

/// Minimum modulus size for use up to and including `use_until_year`.
pub fn policy_recommendation(use_until_year: i32) -> Result<BitLength> {
    CalendarDate::year_start(use_until_year)?;
    BitLength::new(if use_until_year <= POLICY_2048_UNTIL { 2048 } else { 3072 })
}
