//! Historical factoring records: loading, validation, trend fitting and
//! effort extrapolation.
//!
//! Record files are comma-separated with the header
//! `name,bits,decimal_digits,date_factored,wall_hours,mips_years,algorithm`.
//! Empty fields are absent values and dates are `YYYY` or `YYYY-MM`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::effort::{effort_ratio, BitLength};
use crate::error::{Error, Result};
use crate::moore::CalendarDate;
use crate::stats::linear_fit;

pub const HEADER: [&str; 7] = [
    "name",
    "bits",
    "decimal_digits",
    "date_factored",
    "wall_hours",
    "mips_years",
    "algorithm",
];

/// Largest allowed gap between stated bits and bits derived from digits.
pub const DIGITS_BITS_TOLERANCE: u32 = 4;

/// The bundled dataset: every row of the published MIPS-year and wall-hour tables.
pub const BUNDLED_CSV: &str = include_str!("../data/factoring_records.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FactoringAlgorithm {
    Mpqs,
    Nfs,
    Other,
}

impl FromStr for FactoringAlgorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "MPQS" => Ok(Self::Mpqs),
            "NFS" | "GNFS" => Ok(Self::Nfs),
            "OTHER" => Ok(Self::Other),
            other => Err(Error::input(format!("unknown algorithm {other:?}"))),
        }
    }
}

impl fmt::Display for FactoringAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mpqs => "MPQS",
            Self::Nfs => "NFS",
            Self::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactoringRecord {
    pub name: String,
    pub bits: Option<BitLength>,
    pub decimal_digits: Option<u32>,
    pub date_factored: CalendarDate,
    pub wall_hours: Option<f64>,
    pub mips_years: Option<f64>,
    pub algorithm: FactoringAlgorithm,
}

impl FactoringRecord {
    /// Stated bit length, or the upper bound derived from decimal digits.
    pub fn effective_bits(&self) -> Option<BitLength> {
        self.bits
            .or_else(|| self.decimal_digits.and_then(|d| digits_to_bits(d).ok()))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |message: String| Error::Validation {
            record: self.name.clone(),
            message,
        };
        if self.name.trim().is_empty() {
            return Err(fail("empty name".into()));
        }
        match (self.bits, self.decimal_digits) {
            (None, None) => return Err(fail("needs bits or decimal_digits".into())),
            (Some(bits), Some(digits)) => {
                let derived = digits_to_bits(digits).map_err(|e| fail(e.to_string()))?;
                if bits.get().abs_diff(derived.get()) > DIGITS_BITS_TOLERANCE {
                    return Err(fail(format!(
                        "{bits} bits inconsistent with {digits} digits (~{derived} bits)"
                    )));
                }
            }
            (None, Some(0)) => return Err(fail("decimal_digits must be positive".into())),
            _ => {}
        }
        for (field, v) in [("wall_hours", self.wall_hours), ("mips_years", self.mips_years)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(fail(format!("{field} must be positive, got {v}")));
                }
            }
        }
        Ok(())
    }
}

/// `ceil(digits * log2 10)`, an upper bound on the bit length of a `digits`-digit number.
pub fn digits_to_bits(decimal_digits: u32) -> Result<BitLength> {
    if decimal_digits == 0 {
        return Err(Error::input("decimal_digits must be positive"));
    }
    let bits = (f64::from(decimal_digits) * std::f64::consts::LOG2_10).ceil();
    BitLength::new(bits as u32)
}

fn parse_opt<T: FromStr>(field: &str, line: usize, what: &str) -> Result<Option<T>> {
    let field = field.trim();
    if field.is_empty() {
        return Ok(None);
    }
    field.parse().map(Some).map_err(|_| Error::Parse {
        line,
        message: format!("bad {what} {field:?}"),
    })
}

/// Parses and validates a record file, returning records sorted by date.
pub fn load_records(source: &str) -> Result<Vec<FactoringRecord>> {
    if source.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse {
        line: 1,
        message: e.to_string(),
    })?;
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {:?}", HEADER.join(",")),
        });
    }

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let bad = |message: String| Error::Parse { line, message };

        let name = row[0].to_string();
        if name.is_empty() {
            return Err(bad("missing name".into()));
        }
        let bits = parse_opt::<u32>(&row[1], line, "bits")?
            .map(|b| BitLength::new(b).map_err(|e| bad(e.to_string())))
            .transpose()?;
        let date_factored = row[3]
            .parse::<CalendarDate>()
            .map_err(|e| bad(e.to_string()))?;
        let record = FactoringRecord {
            name,
            bits,
            decimal_digits: parse_opt(&row[2], line, "decimal_digits")?,
            date_factored,
            wall_hours: parse_opt(&row[4], line, "wall_hours")?,
            mips_years: parse_opt(&row[5], line, "mips_years")?,
            algorithm: row[6].parse().map_err(|e: Error| bad(e.to_string()))?,
        };
        record.validate()?;
        if !seen.insert((record.name.clone(), record.date_factored)) {
            return Err(Error::Validation {
                record: record.name,
                message: format!("duplicate entry for {}", record.date_factored),
            });
        }
        records.push(record);
    }
    records.sort_by_key(|r| r.date_factored);
    Ok(records)
}

pub fn bundled_records() -> Vec<FactoringRecord> {
    load_records(BUNDLED_CSV).expect("bundled dataset is valid")
}

/// Writes records in the file format read by [`load_records`].
pub fn serialize_records(records: &[FactoringRecord]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let opt = |v: Option<String>| v.unwrap_or_default();
    writer.write_record(HEADER).expect("in-memory write");
    for r in records {
        writer
            .write_record([
                r.name.clone(),
                opt(r.bits.map(|b| b.to_string())),
                opt(r.decimal_digits.map(|d| d.to_string())),
                r.date_factored.to_string(),
                opt(r.wall_hours.map(|v| v.to_string())),
                opt(r.mips_years.map(|v| v.to_string())),
                r.algorithm.to_string(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Exponential trend `bits(t) = a * exp(b * (t - t0))`, fitted in log space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendFit {
    pub a: f64,
    pub b: f64,
    /// Fractional year of the earliest point.
    pub t0: f64,
    /// `ln(bits) - ln(model)` per point, in input order.
    pub residuals: Vec<f64>,
    pub r_squared: f64,
}

impl TrendFit {
    pub fn predict(&self, t: f64) -> f64 {
        self.a * (self.b * (t - self.t0)).exp()
    }
}

/// Fits `(fractional_year, bits)` points by regressing `ln(bits)` on time.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<TrendFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().any(|&(_, y)| !(y > 0.0 && y.is_finite())) {
        return Err(Error::Fit("bit lengths must be positive".into()));
    }
    let t0 = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xs: Vec<f64> = points.iter().map(|p| p.0 - t0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let fit = linear_fit(&xs, &ys).ok_or_else(|| Error::Fit("all dates identical".into()))?;
    let residuals = xs.iter().zip(&ys).map(|(&x, &y)| y - fit.predict(x)).collect();
    Ok(TrendFit {
        a: fit.intercept.exp(),
        b: fit.slope,
        t0,
        residuals,
        r_squared: fit.r_squared,
    })
}

/// Bit-length-versus-date trend over records, at month-centre resolution.
/// Records without bits use the bound derived from their digit count.
pub fn fit_trend(records: &[FactoringRecord]) -> Result<TrendFit> {
    let points: Vec<(f64, f64)> = records
        .iter()
        .filter_map(|r| {
            r.effective_bits()
                .map(|b| (r.date_factored.fractional_year(), f64::from(b.get())))
        })
        .collect();
    fit_exponential(&points)
}

/// MIPS-years for `target_bits`, scaled from `source` by the NFS effort ratio.
pub fn extrapolate_effort(source: &FactoringRecord, target_bits: BitLength) -> Result<f64> {
    let mips = source
        .mips_years
        .ok_or_else(|| Error::input(format!("{} has no MIPS-years figure", source.name)))?;
    let bits = source
        .bits
        .ok_or_else(|| Error::input(format!("{} has no bit length", source.name)))?;
    let ratio = effort_ratio(target_bits, bits);
    Ok(mips * ratio.value_lossy())
}

/// Historical MIPS-year extrapolation reported alongside an actual effort.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtrapolationNote {
    pub target: &'static str,
    pub from: &'static str,
    pub mips_years: f64,
}

/// Published predictions of the RSA-155 effort from the two previous records.
pub const EXTRAPOLATION_NOTES: [ExtrapolationNote; 2] = [
    ExtrapolationNote {
        target: "RSA-155",
        from: "RSA-140",
        mips_years: 16_800.0,
    },
    ExtrapolationNote {
        target: "RSA-155",
        from: "RSA-130",
        mips_years: 33_600.0,
    },
];

pub fn find_record<'a>(records: &'a [FactoringRecord], name: &str) -> Option<&'a FactoringRecord> {
    records.iter().find(|r| r.name.eq_ignore_ascii_case(name))
}

/// Wall hours of the first record with `bits` factored in `year`.
pub fn hours_for(records: &[FactoringRecord], bits: u32, year: i32) -> Option<f64> {
    records
        .iter()
        .find(|r| r.effective_bits().map(BitLength::get) == Some(bits) && r.date_factored.year() == year)
        .and_then(|r| r.wall_hours)
}
