//! Heuristic Number Field Sieve cost, `L[n] = exp(c (ln n)^(1/3) (ln ln n)^(2/3))`
//! with `c = (64/9)^(1/3)`, evaluated entirely in the log domain.
//!
//! The modulus is modelled as exactly `2^bits`, and the `o(1)` term of the
//! rigorous L-notation is dropped.

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnitude::LogMagnitude;

/// Exponent `u` of the L-notation.
pub const NFS_U: f64 = 1.0 / 3.0;

/// `c = (64/9)^(1/3)`, at full precision rather than the rounded `1.923`.
pub fn nfs_constant() -> f64 {
    (64.0f64 / 9.0).cbrt()
}

/// Bit length of a modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct BitLength(u32);

impl BitLength {
    pub const MIN: u32 = 2;
    pub const MAX: u32 = 1_000_000;

    pub fn new(bits: u32) -> Result<Self> {
        if !(Self::MIN..=Self::MAX).contains(&bits) {
            return Err(Error::input(format!(
                "bit length {bits} outside [{}, {}]",
                Self::MIN,
                Self::MAX
            )));
        }
        Ok(Self(bits))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `ln n` for `n = 2^bits`.
    pub fn ln_modulus(self) -> f64 {
        f64::from(self.0) * LN_2
    }
}

impl TryFrom<u32> for BitLength {
    type Error = Error;
    fn try_from(v: u32) -> Result<Self> {
        Self::new(v)
    }
}

impl From<BitLength> for u32 {
    fn from(b: BitLength) -> u32 {
        b.0
    }
}

impl fmt::Display for BitLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Factoring effort, stored as `ln L[n]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EffortValue {
    ln_effort: f64,
}

impl EffortValue {
    pub fn ln(self) -> f64 {
        self.ln_effort
    }

    pub fn magnitude(self) -> LogMagnitude {
        LogMagnitude::from_ln(self.ln_effort)
    }
}

impl fmt::Display for EffortValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.magnitude(), f)
    }
}

/// `ln L` for a modulus of `bits` bits.
pub fn l_effort(bits: BitLength) -> EffortValue {
    let ln_n = bits.ln_modulus();
    let ln_ln_n = ln_n.ln();
    let ln_effort = nfs_constant() * ln_n.powf(NFS_U) * ln_ln_n.powf(1.0 - NFS_U);
    EffortValue { ln_effort }
}

/// Convenience wrapper over [`l_effort`] taking a raw bit count.
pub fn l_effort_bits(bits: u32) -> Result<EffortValue> {
    BitLength::new(bits).map(l_effort)
}

/// How many times harder `target` is to factor than `baseline`.
///
/// Use [`LogMagnitude::value`] for the linear ratio; it is `None` once the
/// ratio no longer fits an `f64`.
pub fn effort_ratio(target: BitLength, baseline: BitLength) -> LogMagnitude {
    LogMagnitude::from_ln(l_effort(target).ln() - l_effort(baseline).ln())
}

/// The `b` with `L[n] = 2^b`.
pub fn security_bits(bits: BitLength) -> f64 {
    l_effort(bits).ln() / LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bl(b: u32) -> BitLength {
        BitLength::new(b).unwrap()
    }

    #[test]
    fn rejects_out_of_range_bit_lengths() {
        assert!(BitLength::new(0).is_err());
        assert!(BitLength::new(1).is_err());
        assert!(BitLength::new(1_000_001).is_err());
        assert!(BitLength::new(2).is_ok());
        assert!(BitLength::new(1_000_000).is_ok());
    }

    #[test]
    fn constant_is_not_the_rounded_one() {
        assert!((nfs_constant() - 1.922999).abs() < 1e-5);
        assert_ne!(nfs_constant(), 1.923);
    }

    // Golden values from a 50-digit mpmath evaluation of the same formula.
    #[test]
    fn l_effort_matches_high_precision_oracle() {
        let cases = [
            (2, 1.0169637292376815),
            (512, 44.312444547982926),
            (768, 53.034144648600458),
            (1024, 60.141690926460405),
            (2048, 81.017685639089858),
            (15360, 186.72329562822487),
        ];
        for (bits, ln_l) in cases {
            let got = l_effort(bl(bits)).ln();
            assert!((got - ln_l).abs() < 1e-12 * ln_l, "{bits}: {got} vs {ln_l}");
        }
        let l512 = l_effort(bl(512)).magnitude().value().unwrap();
        assert!((l512 / 1.75650805949446e19 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn l_effort_near_published_table() {
        for (bits, published) in [
            (512, 1.73671977e19),
            (768, 1.06663813e23),
            (1024, 1.30207587e26),
            (2048, 1.52377537e35),
        ] {
            let v = l_effort(bl(bits)).magnitude().value().unwrap();
            assert!((v / published - 1.0).abs() < 0.05, "{bits}");
        }
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(effort_ratio(bl(512), bl(512)).value(), Some(1.0));
        let r = effort_ratio(bl(768), bl(512)).value().unwrap();
        assert!((r / 6.14168242e3 - 1.0).abs() < 0.02);
        let r = effort_ratio(bl(2048), bl(512)).value().unwrap();
        assert!((r / 8.77387012e15 - 1.0).abs() < 0.02);
    }

    #[test]
    fn huge_ratio_reported_in_log_form() {
        let r = effort_ratio(bl(1_000_000), bl(2));
        assert!(r.value().is_none());
        assert!(r.log10() > 300.0);
    }

    #[test]
    fn security_bits_examples() {
        assert!((security_bits(bl(512)) - 63.929343999).abs() < 1e-6);
        assert!((security_bits(bl(1024)) - 86.766119250).abs() < 1e-6);
        assert!(security_bits(bl(2)) > 0.0);
    }

    #[test]
    fn display_is_scientific() {
        assert_eq!(format!("{:.4}", l_effort(bl(512))), "1.7565E+19");
    }
}
