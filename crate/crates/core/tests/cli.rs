mod common;

use common::{compare_golden, run_cli};
use keystrength::estimator::{break_time, BaselineRecord};
use keystrength::moore::calibrate_doubling;
use keystrength::records::{bundled_records, fit_trend};
use keystrength::{l_effort, security_bits, BitLength, CalendarDate, DoublingModel};
use serde_json::Value;
use std::io::Write;

fn ok(args: &[&str]) -> String {
    let (code, out, err) = run_cli(args);
    assert_eq!(code, 0, "{args:?} failed: {err}");
    out
}

fn json(args: &[&str]) -> Value {
    let mut argv = args.to_vec();
    argv.extend(["--format", "json"]);
    let out = ok(&argv);
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"))
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn reference_tables_match_goldens() {
    for which in 1..=8u8 {
        let out = ok(&["tables", "--which", &which.to_string(), "--format", "csv"]);
        compare_golden(which, &out).unwrap();
    }
}

#[test]
fn golden_comparison_detects_drift() {
    let out = ok(&["tables", "--which", "7", "--format", "csv"]);
    let drifted = out.replace("1.875", "1.8751");
    assert!(compare_golden(7, &drifted).is_err());
    let truncated: String = out.lines().take(4).map(|l| format!("{l}\n")).collect();
    assert!(compare_golden(7, &truncated).is_err());
}

#[test]
fn effort_json_matches_library_exactly() {
    let v = json(&["effort", "--bits", "512"]);
    let e = l_effort(BitLength::new(512).unwrap());
    assert_eq!(num(&v, "ln_effort"), e.ln());
    assert_eq!(num(&v, "security_bits"), security_bits(BitLength::new(512).unwrap()));
    assert!((num(&v, "effort") / 1.7e19 - 1.0).abs() < 0.05);
    assert_eq!(num(&v, "security_bits").round(), 64.0);
}

#[test]
fn effort_table_prints_scientific_notation() {
    let out = ok(&["effort", "--bits", "512"]);
    assert!(out.contains("1.75650806E+19"), "{out}");
}

#[test]
fn estimate_json_matches_break_time() {
    let v = json(&["estimate", "--bits", "768", "--year", "2015"]);
    let base = BaselineRecord::rsa512_2015();
    let est = break_time(
        BitLength::new(768).unwrap(),
        CalendarDate::new(2015, 1).unwrap(),
        &base,
        DoublingModel::default(),
    );
    assert_eq!(num(&v, "hours"), est.hours());
    assert!((num(&v, "hours") / 24_567.0 - 1.0).abs() < 0.02);
    assert!((num(&v, "years") / 2.80 - 1.0).abs() < 0.02);
}

#[test]
fn calibrate_and_tables4_json() {
    let v = json(&["calibrate", "--hours-early", "5040", "--hours-late", "4", "--months", "192"]);
    let lib = calibrate_doubling(5040.0, 4.0, 192.0).unwrap().period_months();
    assert_eq!(num(&v, "doubling_months"), lib);

    let rows = json(&["tables", "--which", "4"]);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(num(&rows[2], "doubling_months"), lib);
    let text = ok(&["tables", "--which", "4"]);
    assert!(text.contains("18.6422"), "{text}");
}

#[test]
fn records_fit_json_matches_library() {
    let v = json(&["records", "fit"]);
    let fit = fit_trend(&bundled_records()).unwrap();
    assert_eq!(num(&v, "a"), fit.a);
    assert_eq!(num(&v, "b"), fit.b);
    assert_eq!(num(&v, "r_squared"), fit.r_squared);
}

#[test]
fn every_subcommand_emits_parseable_json() {
    let cases: &[&[&str]] = &[
        &["effort", "--bits", "512,768,1024"],
        &["ratio", "--target", "2048"],
        &["calibrate", "--hours-early", "5040", "--hours-late", "4", "--months", "192"],
        &["project", "--hours", "5040", "--months", "192", "--doubling", "18"],
        &["estimate", "--bits", "1024,2048", "--date", "2030-06"],
        &["min-bits", "--from", "2018", "--lifespan", "25"],
        &["min-bits", "--from", "2018", "--lifespan", "25", "--mode", "cumulative-work", "--round"],
        &["levels"],
        &["levels", "--family", "ecc", "--level", "128"],
        &["levels", "--family", "rsa", "--key-bits", "3072"],
        &["policy", "--year", "2031"],
        &["tables", "--which", "2"],
        &["records", "load"],
        &["records", "fit"],
        &["records", "extrapolate", "--from", "RSA-140", "--bits", "512"],
        &["rsa", "keygen", "--bits", "64"],
        &["rsa", "encrypt", "--n", "143", "--e", "7", "--m", "42"],
        &["rsa", "decrypt", "--n", "143", "--d", "103", "--c", "81"],
        &["rsa", "break", "--n", "8616460799", "--e", "7"],
        &["bench", "factor", "--sizes", "24,32", "--trials", "3"],
    ];
    for args in cases {
        let v = json(args);
        assert!(v.is_object() || v.is_array(), "{args:?}");
    }
}

#[test]
fn rsa_commands_chain() {
    let c = json(&["rsa", "encrypt", "--n", "143", "--e", "7", "--m", "42"]);
    let c = c["c"].as_str().unwrap().to_string();
    let m = json(&["rsa", "decrypt", "--n", "143", "--d", "103", "--c", &c]);
    assert_eq!(m["m"].as_str(), Some("42"));

    let key = json(&["rsa", "keygen", "--bits", "8", "--seed", "99"]);
    assert_eq!(key["n"].as_str(), Some("143"));
    assert_eq!(key["e"].as_str(), Some("7"));
    assert_eq!(key["d"].as_str(), Some("103"));

    let broken = json(&["rsa", "break", "--n", "8616460799", "--e", "7"]);
    let p: u64 = broken["p"].as_str().unwrap().parse().unwrap();
    let q: u64 = broken["q"].as_str().unwrap().parse().unwrap();
    assert_eq!((p, q), (89_681, 96_079));
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let cases: &[&[&str]] = &[
        &["tables", "--which", "6", "--format", "csv"],
        &["min-bits", "--from", "2020-03", "--lifespan", "30", "--margin", "2"],
        &["rsa", "keygen", "--bits", "128", "--seed", "12345", "--format", "json"],
        &["rsa", "break", "--n", "8616460799", "--e", "7", "--seed", "5"],
        &["records", "load", "--format", "csv"],
    ];
    for args in cases {
        assert_eq!(ok(args), ok(args), "{args:?}");
    }
    assert_ne!(
        ok(&["rsa", "keygen", "--bits", "128", "--seed", "1"]),
        ok(&["rsa", "keygen", "--bits", "128", "--seed", "2"])
    );
}

#[test]
fn exit_codes() {
    let (code, out, _) = run_cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));

    let (code, _, err) = run_cli(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"), "{err}");
    assert_eq!(run_cli(&["effort", "--bogus"]).0, 2);
    assert_eq!(run_cli(&["tables", "--which", "9"]).0, 2);
    assert_eq!(run_cli(&["effort", "--bits", "512", "--format", "xml"]).0, 2);

    let (code, out, err) = run_cli(&["effort", "--bits", "1"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.starts_with("error:"), "{err}");
    assert_eq!(run_cli(&["policy", "--year", "1800"]).0, 1);
    assert_eq!(run_cli(&["calibrate", "--hours-early", "4", "--hours-late", "5040", "--months", "192"]).0, 1);
    assert_eq!(run_cli(&["rsa", "break", "--n", "1000003", "--e", "3"]).0, 1);
    assert_eq!(run_cli(&["bench", "factor", "--sizes", "200"]).0, 1);
}

#[test]
fn policy_and_levels() {
    assert_eq!(num(&json(&["policy", "--year", "2030"]), "minimum_bits"), 2048.0);
    assert_eq!(num(&json(&["policy", "--year", "2031"]), "minimum_bits"), 3072.0);
    let v = json(&["levels", "--family", "rsa", "--level", "128"]);
    assert_eq!(num(&v, "key_bits"), 3072.0);
}

#[test]
fn config_file_overrides_defaults() {
    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    write!(
        cfg,
        r#"{{"baseline": {{"bits": 512, "wall_hours": 8, "date": "2015-01"}}, "doubling_months": 18}}"#
    )
    .unwrap();
    let path = cfg.path().to_str().unwrap();
    let doubled = num(&json(&["estimate", "--bits", "768", "--year", "2015", "--config", path]), "hours");
    let plain = num(&json(&["estimate", "--bits", "768", "--year", "2015"]), "hours");
    assert!((doubled / plain - 2.0).abs() < 1e-12);

    let flag = num(
        &json(&["estimate", "--bits", "768", "--year", "2015", "--config", path, "--baseline-hours", "4"]),
        "hours",
    );
    assert_eq!(flag, plain);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"doubling": 18}}"#).unwrap();
    assert_eq!(run_cli(&["effort", "--bits", "512", "--config", bad.path().to_str().unwrap()]).0, 1);
}

#[test]
fn records_file_replaces_bundled_dataset() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        "name,bits,decimal_digits,date_factored,wall_hours,mips_years,algorithm\n\
         A,400,,1990,,,MPQS\nB,500,,2000,,,NFS\nC,600,,2010,,,NFS\n"
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    let loaded = json(&["records", "load", "--records-file", path]);
    assert_eq!(loaded.as_array().unwrap().len(), 3);
    let fit = json(&["records", "fit", "--records-file", path]);
    assert!(num(&fit, "b") > 0.0);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, "name,bits\nA,400\n").unwrap();
    let (code, _, err) = run_cli(&["records", "load", "--records-file", bad.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn bench_writes_summary_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("summary.json");
    let out = ok(&[
        "bench", "factor", "--sizes", "20,24,28", "--trials", "3", "--format", "csv",
        "--summary", path.to_str().unwrap(),
    ]);
    assert!(out.starts_with("bits,trial,algorithm,wall_seconds,timeout\n"));
    assert_eq!(out.lines().count(), 1 + 9);
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(summary["sizes"], serde_json::json!([20, 24, 28]));
    assert_eq!(summary["trials"], 3);
    assert!(summary.get("slope").is_some() && summary.get("r2").is_some());
}
