//! Log-domain magnitudes and their scientific-notation rendering.
//!
//! Effort values overflow `f64` long before the bit lengths of interest stop
//! (L for 15360 bits is around 1e81, and the estimator searches up to a
//! million bits), so every quantity is carried as a natural logarithm and
//! only rendered to linear scale for display.

use std::f64::consts::LN_10;
use std::fmt;

/// A positive quantity stored as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogMagnitude {
    ln: f64,
}

impl LogMagnitude {
    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(ln.is_finite());
        Self { ln }
    }

    /// `value` must be positive and finite.
    pub fn from_value(value: f64) -> Self {
        Self::from_ln(value.ln())
    }

    pub fn ln(self) -> f64 {
        self.ln
    }

    pub fn log10(self) -> f64 {
        self.ln / LN_10
    }

    pub fn log2(self) -> f64 {
        self.ln / std::f64::consts::LN_2
    }

    /// Linear value, or `None` when it does not fit in an `f64`.
    pub fn value(self) -> Option<f64> {
        let v = self.ln.exp();
        (v.is_finite() && v > 0.0).then_some(v)
    }

    /// Linear value, saturating to infinity / zero.
    pub fn value_lossy(self) -> f64 {
        self.ln.exp()
    }

    /// Splits into `(mantissa, exponent)` with `1 <= mantissa < 10`.
    pub fn scientific(self) -> (f64, i64) {
        let l10 = self.log10();
        let mut exponent = l10.floor();
        let mut mantissa = 10f64.powf(l10 - exponent);
        // floor/powf can land a hair on either side of a decade boundary
        if mantissa >= 10.0 {
            mantissa /= 10.0;
            exponent += 1.0;
        } else if mantissa < 1.0 {
            mantissa *= 10.0;
            exponent -= 1.0;
        }
        (mantissa, exponent as i64)
    }

    pub fn mul(self, other: LogMagnitude) -> Self {
        Self::from_ln(self.ln + other.ln)
    }

    pub fn div(self, other: LogMagnitude) -> Self {
        Self::from_ln(self.ln - other.ln)
    }

    pub fn scale(self, factor: f64) -> Self {
        Self::from_ln(self.ln + factor.ln())
    }
}

impl fmt::Display for LogMagnitude {
    /// Renders as `1.75650806E+19`; precision defaults to 8 decimals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(8);
        let (m, e) = self.scientific();
        // rounding the mantissa may carry into the next decade
        let rounded = format!("{m:.prec$}");
        let (m_str, e) = if rounded.starts_with("10") {
            (format!("{:.prec$}", m / 10.0), e + 1)
        } else {
            (rounded, e)
        };
        let sign = if e < 0 { '-' } else { '+' };
        write!(f, "{m_str}E{sign}{:02}", e.abs())
    }
}
