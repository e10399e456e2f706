#![allow(dead_code)]

use std::path::PathBuf;

use keystrength::cli;
use keystrength::{break_time, BaselineRecord, BitLength, DoublingModel, SecurityQuery};

/// Runs the CLI in-process and returns (exit code, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["keystrength".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("utf-8 stdout"),
        String::from_utf8(err).expect("utf-8 stderr"),
    )
}

pub fn golden_path(which: u8) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("goldens")
        .join(format!("table{which}.csv"))
}

#[derive(Debug, Clone, Copy)]
pub enum Tol {
    Exact,
    Abs(f64),
    /// Relative tolerance, widened to half a unit in the golden's last printed digit.
    Rel(f64),
}

/// Per-column tolerances for the reference tables.
pub fn tolerance(which: u8, column: &str) -> Tol {
    match (which, column) {
        (3, "times_less" | "times_more") => Tol::Rel(0.005),
        (4, "doubling_months" | "hours") => Tol::Abs(0.001),
        (5, "effort") => Tol::Rel(0.05),
        (5, "times_harder") => Tol::Rel(0.02),
        (6, "estimate_hours" | "estimate_years") => Tol::Rel(0.02),
        (8, "minutes" | "hours" | "years") => Tol::Rel(0.02),
        _ => Tol::Exact,
    }
}

/// Half a unit in the last printed digit of `text`, e.g. "0.01" -> 0.005,
/// "1.46231E+14" -> 5e8, "3423" -> 0.5.
pub fn print_resolution(text: &str) -> f64 {
    let lower = text.to_ascii_lowercase();
    let (mantissa, exp) = match lower.split_once('e') {
        Some((m, e)) => (m, e.parse::<i32>().unwrap_or(0)),
        None => (lower.as_str(), 0),
    };
    let decimals = mantissa.split_once('.').map_or(0, |(_, f)| f.len()) as i32;
    0.5 * 10f64.powi(exp - decimals)
}

fn cell_matches(tol: Tol, golden: &str, actual: &str) -> bool {
    let (g, a) = match (golden.parse::<f64>(), actual.parse::<f64>()) {
        (Ok(g), Ok(a)) => (g, a),
        _ => return golden == actual,
    };
    let diff = (a - g).abs();
    match tol {
        Tol::Exact => a == g,
        Tol::Abs(t) => diff <= t,
        Tol::Rel(t) => diff <= (t * g.abs()).max(print_resolution(golden)),
    }
}

fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>), String> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_string)
        .collect();
    let rows = reader
        .records()
        .map(|r| r.map(|r| r.iter().map(str::to_string).collect()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    Ok((header, rows))
}

/// Compares CSV output against the vendored golden for table `which`.
/// Every non-empty golden cell must match; extra output columns are ignored.
pub fn compare_golden(which: u8, actual_csv: &str) -> Result<(), String> {
    let golden_text = std::fs::read_to_string(golden_path(which)).map_err(|e| e.to_string())?;
    let (g_head, g_rows) = parse_csv(&golden_text)?;
    let (a_head, a_rows) = parse_csv(actual_csv)?;
    if g_rows.len() != a_rows.len() {
        return Err(format!(
            "table {which}: {} rows, golden has {}",
            a_rows.len(),
            g_rows.len()
        ));
    }
    for (gi, col) in g_head.iter().enumerate() {
        let ai = a_head
            .iter()
            .position(|h| h == col)
            .ok_or_else(|| format!("table {which}: missing column {col}"))?;
        let tol = tolerance(which, col);
        for (r, (g_row, a_row)) in g_rows.iter().zip(&a_rows).enumerate() {
            let (g, a) = (&g_row[gi], &a_row[ai]);
            if g.is_empty() {
                continue;
            }
            if !cell_matches(tol, g, a) {
                return Err(format!(
                    "table {which} row {r} column {col}: got {a:?}, golden {g:?} ({tol:?})"
                ));
            }
        }
    }
    Ok(())
}

/// Smallest bit length whose projected break time at end of life covers
/// `margin * lifespan`, by scanning upward from 2.
pub fn linear_scan_min_bits(
    q: &SecurityQuery,
    baseline: &BaselineRecord,
    model: DoublingModel,
    cap: u32,
) -> Option<u32> {
    let end = q.end_of_life().ok()?;
    let needed = q.margin * q.lifespan_years;
    if q.lifespan_months() == 0 {
        return Some(2);
    }
    (2..=cap).find(|&b| {
        let bits = BitLength::new(b).unwrap();
        break_time(bits, end, baseline, model).years() >= needed
    })
}

pub fn rel_err(actual: f64, expected: f64) -> f64 {
    ((actual - expected) / expected).abs()
}
