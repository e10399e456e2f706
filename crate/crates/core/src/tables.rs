//! Tabular reports and the regenerated reference tables.
//!
//! Every CLI command produces a [`Table`], rendered as aligned text, CSV or
//! JSON. CSV and JSON numbers use the shortest representation that parses
//! back to the identical `f64`.

use serde_json::{Map, Number, Value};

use crate::effort::{effort_ratio, l_effort, BitLength};
use crate::error::{Error, Result};
use crate::estimator::{
    break_time, security_level_lookup, table8_estimates, BaselineRecord, CryptoFamily,
    SECURITY_LEVELS,
};
use crate::magnitude::LogMagnitude;
use crate::moore::{
    calibrate_doubling, months_between, project_hours, table7_schedule, CalendarDate,
    DoublingModel,
};
use crate::records::{extrapolate_effort, find_record, hours_for, FactoringRecord, EXTRAPOLATION_NOTES};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Text(String),
    Int(i64),
    Num(f64),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(i64::from(v))
    }
}

impl From<BitLength> for Cell {
    fn from(v: BitLength) -> Self {
        Cell::Int(i64::from(v.get()))
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Exact, machine-readable rendering of a float.
pub fn fmt_exact(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Human rendering: nine significant digits, scientific outside `[1e-3, 1e9)`.
pub fn fmt_human(v: f64) -> String {
    if !v.is_finite() {
        return fmt_exact(v);
    }
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e9).contains(&a) {
        let s = LogMagnitude::from_value(a).to_string();
        return if v < 0.0 { format!("-{s}") } else { s };
    }
    let int_digits = a.log10().floor() as i32 + 1;
    let decimals = (9 - int_digits).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub title: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Render JSON as a single object rather than an array of rows.
    pub single: bool,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            title: None,
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            single: false,
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    /// A one-row result rendered as a JSON object.
    pub fn record(columns: &[&str], row: Vec<Cell>) -> Self {
        let mut t = Self::new(columns.iter().copied());
        t.push(row);
        t.single = true;
        t
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Table => self.to_text(),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Empty => String::new(),
                Cell::Text(s) => s.clone(),
                Cell::Int(i) => i.to_string(),
                Cell::Num(v) => fmt_exact(*v),
            }))
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_json(&self) -> Value {
        let row_obj = |row: &Vec<Cell>| {
            let mut m = Map::new();
            for (col, cell) in self.columns.iter().zip(row) {
                let v = match cell {
                    Cell::Empty => Value::Null,
                    Cell::Text(s) => Value::String(s.clone()),
                    Cell::Int(i) => Value::Number((*i).into()),
                    Cell::Num(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
                };
                m.insert(col.clone(), v);
            }
            Value::Object(m)
        };
        if self.single && self.rows.len() == 1 {
            row_obj(&self.rows[0])
        } else {
            Value::Array(self.rows.iter().map(row_obj).collect())
        }
    }

    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Cell::Empty => String::new(),
                        Cell::Text(s) => s.clone(),
                        Cell::Int(i) => i.to_string(),
                        Cell::Num(v) => fmt_human(*v),
                    })
                    .collect()
            })
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.columns[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        if let Some(t) = &self.title {
            out.push_str(t);
            out.push('\n');
        }
        let line = |vals: &[String]| {
            vals.iter()
                .zip(&widths)
                .map(|(v, w)| format!("{v:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        out.push_str(&line(&self.columns));
        out.push('\n');
        out.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
        out.push('\n');
        for r in &cells {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

fn bl(bits: u32) -> BitLength {
    BitLength::new(bits).expect("table bit lengths are valid")
}

/// Bit lengths of equal strength per family and security level.
pub fn table1() -> Table {
    let mut t = Table::new(["family", "systems", "80", "128", "192", "256"])
        .titled("Key sizes per security level (bits)");
    for family in CryptoFamily::ALL {
        let systems = match family {
            CryptoFamily::Rsa => "RSA",
            CryptoFamily::DiscreteLog => "DH, DSA, Elgamal",
            CryptoFamily::EllipticCurve => "ECDH, ECDSA",
            CryptoFamily::Symmetric => "AES, 3DES",
        };
        let mut row = vec![Cell::from(family.name()), Cell::from(systems)];
        for level in SECURITY_LEVELS {
            row.push(security_level_lookup(family, level).expect("tabulated").into());
        }
        t.push(row);
    }
    t
}

/// Historical MIPS-year efforts, the published RSA-155 predictions, and the
/// NFS-model extrapolation from the same sources.
pub fn table2(records: &[FactoringRecord]) -> Table {
    let mut t = Table::new([
        "number",
        "date",
        "mips_years",
        "algorithm",
        "published_from_rsa140",
        "published_from_rsa130",
        "model_from_rsa140",
        "model_from_rsa130",
    ])
    .titled("Computing effort (MIPS-years)");
    for r in records.iter().filter(|r| r.mips_years.is_some()) {
        let note = |from: &str| {
            EXTRAPOLATION_NOTES
                .iter()
                .find(|n| n.target.eq_ignore_ascii_case(&r.name) && n.from == from)
        };
        let model = |from: &str| {
            note(from).and_then(|_| {
                let src = find_record(records, from)?;
                extrapolate_effort(src, r.bits?).ok()
            })
        };
        t.push(vec![
            r.name.clone().into(),
            r.date_factored.year().into(),
            r.mips_years.into(),
            r.algorithm.to_string().into(),
            note("RSA-140").map(|n| n.mips_years).into(),
            note("RSA-130").map(|n| n.mips_years).into(),
            model("RSA-140").into(),
            model("RSA-130").into(),
        ]);
    }
    t
}

/// Wall-clock factoring times and their ratio to the 1999 RSA-512 run.
pub fn table3(records: &[FactoringRecord]) -> Result<Table> {
    let reference = hours_for(records, 512, 1999)
        .ok_or_else(|| Error::input("records lack the 1999 512-bit factoring"))?;
    let mut t = Table::new(["number", "bits", "year", "hours", "times_less", "times_more"])
        .titled("Hours taken for factoring, relative to RSA-512 (1999)");
    for r in records.iter().filter(|r| r.wall_hours.is_some()) {
        let h = r.wall_hours.expect("filtered");
        t.push(vec![
            r.name.clone().into(),
            r.effective_bits().into(),
            r.date_factored.year().into(),
            h.into(),
            (h < reference).then(|| reference / h).into(),
            (h > reference).then(|| h / reference).into(),
        ]);
    }
    Ok(t)
}

/// 18-month doubling versus the observed RSA-512 speedup.
pub fn table4() -> Table {
    let start = CalendarDate::new(1999, 8).expect("valid");
    let end = CalendarDate::new(2015, 8).expect("valid");
    let months = months_between(start, end);
    let (early, late) = (5040.0, 4.0);
    let model = DoublingModel::default();
    let calibrated = calibrate_doubling(early, late, months).expect("valid inputs");
    let mut t = Table::new(["number", "year", "months_between", "doubling_months", "hours"])
        .titled("Doubling every 18 months vs. observed time");
    t.push(vec!["RSA-512".into(), 1999.into(), Cell::Empty, Cell::Empty, early.into()]);
    t.push(vec![
        "RSA-512".into(),
        2015.into(),
        months.into(),
        model.period_months().into(),
        project_hours(early, model, months).into(),
    ]);
    t.push(vec![
        "RSA-512".into(),
        2015.into(),
        months.into(),
        calibrated.period_months().into(),
        project_hours(early, calibrated, months).into(),
    ]);
    t
}

const TABLE_BITS: [u32; 4] = [512, 768, 1024, 2048];

fn rsa_name(bits: u32) -> String {
    format!("RSA-{bits}")
}

/// NFS effort and its ratio to 512 bits.
pub fn table5() -> Table {
    let mut t = Table::new(["number", "bits", "effort", "log10_effort", "times_harder"])
        .titled("NFS effort L[n] and ratio to RSA-512");
    for bits in TABLE_BITS {
        let e = l_effort(bl(bits));
        let ratio = (bits != 512).then(|| effort_ratio(bl(bits), bl(512)).value_lossy());
        t.push(vec![
            rsa_name(bits).into(),
            bits.into(),
            e.magnitude().value().into(),
            e.magnitude().log10().into(),
            ratio.into(),
        ]);
    }
    t
}

/// Break-time estimates scaled from a baseline factoring at its own date.
pub fn table6(baseline: &BaselineRecord, records: &[FactoringRecord]) -> Table {
    let model = DoublingModel::default();
    let mut t = Table::new(["number", "bits", "time_taken_hours", "estimate_hours", "estimate_years"])
        .titled(format!(
            "Time estimates from {} bits in {} h ({})",
            baseline.bits, baseline.wall_hours, baseline.date
        ));
    for bits in TABLE_BITS {
        let taken = if bits == baseline.bits.get() {
            Some(baseline.wall_hours)
        } else {
            records
                .iter()
                .find(|r| r.effective_bits().map(BitLength::get) == Some(bits))
                .and_then(|r| r.wall_hours)
        };
        let est = (bits != baseline.bits.get()).then(|| break_time(bl(bits), baseline.date, baseline, model));
        t.push(vec![
            rsa_name(bits).into(),
            bits.into(),
            taken.into(),
            est.map(|e| e.hours()).into(),
            est.map(|e| e.years()).into(),
        ]);
    }
    t
}

/// The literal RSA-512 halving schedule starting at 240 minutes in 2015.
pub fn table7() -> Table {
    let mut t = Table::new(["year", "years", "minutes"]).titled("RSA-512 break time, halving schedule");
    for row in table7_schedule(240.0, 2015.0, 8).expect("valid inputs") {
        t.push(vec![
            row.year.into(),
            (row.years_elapsed > 0.0).then_some(row.years_elapsed).into(),
            row.minutes.into(),
        ]);
    }
    t
}

/// Estimates assuming RSA-512 takes one minute.
pub fn table8(baseline_minutes: f64) -> Result<Table> {
    let mut t = Table::new(["number", "bits", "minutes", "hours", "years"])
        .titled(format!("Estimates if RSA-512 takes {baseline_minutes} minute(s)"));
    for e in table8_estimates(baseline_minutes)? {
        t.push(vec![
            rsa_name(e.bits.get()).into(),
            e.bits.into(),
            e.minutes().into(),
            e.hours().into(),
            e.years().into(),
        ]);
    }
    Ok(t)
}

/// Regenerates reference table `which` (1 through 8).
pub fn reference_table(which: u8, baseline: &BaselineRecord, records: &[FactoringRecord]) -> Result<Table> {
    match which {
        1 => Ok(table1()),
        2 => Ok(table2(records)),
        3 => table3(records),
        4 => Ok(table4()),
        5 => Ok(table5()),
        6 => Ok(table6(baseline, records)),
        7 => Ok(table7()),
        8 => table8(1.0),
        n => Err(Error::input(format!("no table {n}; expected 1 through 8"))),
    }
}
