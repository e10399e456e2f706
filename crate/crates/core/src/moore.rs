//! Compute-power growth as a doubling law over calendar months.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Month-resolution calendar date.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CalendarDate {
    year: i32,
    month: u8,
}

impl CalendarDate {
    pub const MIN_YEAR: i32 = 1900;
    pub const MAX_YEAR: i32 = 2500;

    pub fn new(year: i32, month: u8) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::input(format!("month {month} outside [1, 12]")));
        }
        if !(Self::MIN_YEAR..=Self::MAX_YEAR).contains(&year) {
            return Err(Error::input(format!(
                "year {year} outside [{}, {}]",
                Self::MIN_YEAR,
                Self::MAX_YEAR
            )));
        }
        Ok(Self { year, month })
    }

    /// January of `year`.
    pub fn year_start(year: i32) -> Result<Self> {
        Self::new(year, 1)
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u8 {
        self.month
    }

    /// Year plus the centre of the month, e.g. 1999-08 -> 1999.625.
    pub fn fractional_year(self) -> f64 {
        f64::from(self.year) + (f64::from(self.month) - 0.5) / 12.0
    }

    fn month_index(self) -> i64 {
        i64::from(self.year) * 12 + i64::from(self.month) - 1
    }

    pub fn add_months(self, months: i64) -> Result<Self> {
        let idx = self.month_index() + months;
        let year = idx.div_euclid(12);
        let month = (idx.rem_euclid(12) + 1) as u8;
        let year = i32::try_from(year).map_err(|_| Error::input("date out of range"))?;
        Self::new(year, month)
    }
}

impl fmt::Display for CalendarDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// Accepts `YYYY` (read as January) or `YYYY-MM`.
impl FromStr for CalendarDate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::input(format!("malformed date {s:?}, expected YYYY or YYYY-MM"));
        let (y, m) = match s.split_once('-') {
            Some((y, m)) => (y, Some(m)),
            None => (s, None),
        };
        if y.len() != 4 || !y.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let year: i32 = y.parse().map_err(|_| bad())?;
        let month = match m {
            Some(m) if (1..=2).contains(&m.len()) && m.bytes().all(|b| b.is_ascii_digit()) => {
                m.parse().map_err(|_| bad())?
            }
            Some(_) => return Err(bad()),
            None => 1,
        };
        Self::new(year, month)
    }
}

impl TryFrom<String> for CalendarDate {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CalendarDate> for String {
    fn from(d: CalendarDate) -> String {
        d.to_string()
    }
}

/// Signed month count from `a` to `b`.
pub fn months_between(a: CalendarDate, b: CalendarDate) -> f64 {
    (b.month_index() - a.month_index()) as f64
}

/// Months per doubling of available compute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublingModel {
    period_months: f64,
}

impl DoublingModel {
    /// The conventional 18-month doubling.
    pub const DEFAULT_PERIOD_MONTHS: f64 = 18.0;

    pub fn new(period_months: f64) -> Result<Self> {
        if !(period_months.is_finite() && period_months > 0.0) {
            return Err(Error::input(format!(
                "doubling period must be positive and finite, got {period_months}"
            )));
        }
        Ok(Self { period_months })
    }

    /// Period fitted to the two RSA-512 factorings (5040 h in 1999, 4 h in 2015).
    pub fn rsa512_calibrated() -> Self {
        calibrate_doubling(5040.0, 4.0, 192.0).expect("constant calibration inputs are valid")
    }

    pub fn period_months(self) -> f64 {
        self.period_months
    }

    /// Doublings elapsed over `elapsed_months`, i.e. `log2` of the scale factor.
    pub fn doublings(self, elapsed_months: f64) -> f64 {
        elapsed_months / self.period_months
    }
}

impl Default for DoublingModel {
    fn default() -> Self {
        Self {
            period_months: Self::DEFAULT_PERIOD_MONTHS,
        }
    }
}

/// Compute-power growth factor `2^(elapsed / period)`.
///
/// Large exponents overflow; [`DoublingModel::doublings`] gives the log2
/// value, which is the authoritative form.
pub fn scale_factor(model: DoublingModel, elapsed_months: f64) -> f64 {
    model.doublings(elapsed_months).exp2()
}

/// Doubling period implied by a run taking `hours_early` and a later run of the
/// same job taking `hours_late`, `elapsed_months` apart.
pub fn calibrate_doubling(
    hours_early: f64,
    hours_late: f64,
    elapsed_months: f64,
) -> Result<DoublingModel> {
    for (name, v) in [
        ("hours_early", hours_early),
        ("hours_late", hours_late),
        ("elapsed_months", elapsed_months),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::input(format!("{name} must be positive, got {v}")));
        }
    }
    if hours_late >= hours_early {
        return Err(Error::Calibration(format!(
            "no speedup observed ({hours_early} h -> {hours_late} h)"
        )));
    }
    DoublingModel::new(elapsed_months / (hours_early / hours_late).log2())
}

/// Hours a job taking `hours_at_ref` would take `elapsed_months` later.
pub fn project_hours(hours_at_ref: f64, model: DoublingModel, elapsed_months: f64) -> f64 {
    hours_at_ref / scale_factor(model, elapsed_months)
}

/// One row of the literal RSA-512 halving schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleRow {
    pub year: f64,
    pub years_elapsed: f64,
    pub minutes: f64,
}

/// Reproduces the printed RSA-512 break schedule: the start row, then row `k`
/// at `start + 1.5 * 2^(k-1)` years taking `start_minutes / 2^k`. The spacing
/// doubles each row, so this is *not* the exponential doubling law used by
/// [`project_hours`]; it exists to regenerate the published table.
///
/// `rows` counts every row including the starting one.
pub fn table7_schedule(start_minutes: f64, start_year: f64, rows: u32) -> Result<Vec<ScheduleRow>> {
    if !(start_minutes.is_finite() && start_minutes > 0.0) {
        return Err(Error::input("start_minutes must be positive"));
    }
    if rows == 0 {
        return Err(Error::input("schedule needs at least one row"));
    }
    Ok((0..rows)
        .map(|k| {
            let years_elapsed = if k == 0 {
                0.0
            } else {
                1.5 * f64::from(k - 1).exp2()
            };
            ScheduleRow {
                year: start_year + years_elapsed,
                years_elapsed,
                minutes: start_minutes / f64::from(k).exp2(),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(y: i32, m: u8) -> CalendarDate {
        CalendarDate::new(y, m).unwrap()
    }

    #[test]
    fn date_validation_and_parsing() {
        assert!(CalendarDate::new(2015, 0).is_err());
        assert!(CalendarDate::new(2015, 13).is_err());
        assert!(CalendarDate::new(1899, 1).is_err());
        assert!(CalendarDate::new(2501, 1).is_err());
        assert_eq!("1999-08".parse::<CalendarDate>().unwrap(), d(1999, 8));
        assert_eq!("2015".parse::<CalendarDate>().unwrap(), d(2015, 1));
        assert_eq!("2015-3".parse::<CalendarDate>().unwrap(), d(2015, 3));
        for bad in ["", "15", "2015-", "2015-13", "2015-x", "abcd", "2015-08-01"] {
            assert!(bad.parse::<CalendarDate>().is_err(), "{bad:?}");
        }
        assert_eq!(d(1999, 8).to_string(), "1999-08");
    }

    #[test]
    fn add_months_crosses_years() {
        assert_eq!(d(2015, 11).add_months(3).unwrap(), d(2016, 2));
        assert_eq!(d(2015, 1).add_months(-1).unwrap(), d(2014, 12));
        assert!(d(2500, 12).add_months(1).is_err());
    }

    #[test]
    fn months_between_examples() {
        assert_eq!(months_between(d(1999, 8), d(2015, 8)), 192.0);
        assert_eq!(months_between(d(2015, 1), d(2015, 1)), 0.0);
        assert_eq!(months_between(d(2015, 1), d(2014, 1)), -12.0);
    }

    #[test]
    fn scale_factor_examples() {
        let m = DoublingModel::default();
        assert!((scale_factor(m, 192.0) - 1625.4986772154363).abs() < 1e-9);
        assert_eq!(scale_factor(m, 0.0), 1.0);
        assert_eq!(scale_factor(m, 36.0), 4.0);
    }

    #[test]
    fn calibration_examples() {
        let m = calibrate_doubling(5040.0, 4.0, 192.0).unwrap();
        assert!((m.period_months() - 18.6422).abs() < 0.001);
        let m = calibrate_doubling(5040.0, 3.10059, 192.0).unwrap();
        assert!((m.period_months() - 18.0).abs() < 0.001);
        let m = calibrate_doubling(8.0, 2.0, 36.0).unwrap();
        assert!((m.period_months() - 18.0).abs() < 1e-12);
    }

    #[test]
    fn calibration_errors() {
        assert!(matches!(
            calibrate_doubling(4.0, 4.0, 12.0),
            Err(Error::Calibration(_))
        ));
        assert!(matches!(
            calibrate_doubling(4.0, 8.0, 12.0),
            Err(Error::Calibration(_))
        ));
        assert!(matches!(calibrate_doubling(0.0, 1.0, 12.0), Err(Error::Input(_))));
        assert!(matches!(calibrate_doubling(8.0, 2.0, 0.0), Err(Error::Input(_))));
        assert!(matches!(calibrate_doubling(8.0, -2.0, 1.0), Err(Error::Input(_))));
        assert!(DoublingModel::new(0.0).is_err());
        assert!(DoublingModel::new(f64::INFINITY).is_err());
    }

    #[test]
    fn projection_examples() {
        let m = DoublingModel::default();
        assert!((project_hours(5040.0, m, 192.0) - 3.10059).abs() < 0.001);
        assert_eq!(project_hours(7.25, m, 0.0), 7.25);
        assert_eq!(project_hours(4.0, m, 24.0 * 12.0), 4.0 / 65536.0);
    }

    #[test]
    fn schedule_reproduces_printed_rows() {
        let rows = table7_schedule(240.0, 2015.0, 8).unwrap();
        let got: Vec<(f64, f64)> = rows.iter().map(|r| (r.year, r.minutes)).collect();
        assert_eq!(
            got,
            vec![
                (2015.0, 240.0),
                (2016.5, 120.0),
                (2018.0, 60.0),
                (2021.0, 30.0),
                (2027.0, 15.0),
                (2039.0, 7.5),
                (2063.0, 3.75),
                (2111.0, 1.875),
            ]
        );
        let six = table7_schedule(240.0, 2015.0, 6).unwrap();
        assert_eq!(six.last().map(|r| (r.year, r.minutes)), Some((2039.0, 7.5)));
        assert!(table7_schedule(240.0, 2015.0, 0).is_err());
    }
}
