use keystrength::records::{
    bundled_records, digits_to_bits, fit_exponential, fit_trend, hours_for, load_records,
    serialize_records, FactoringAlgorithm, FactoringRecord,
};
use keystrength::{BitLength, CalendarDate};
use proptest::prelude::*;

fn algorithm() -> impl Strategy<Value = FactoringAlgorithm> {
    prop_oneof![
        Just(FactoringAlgorithm::Mpqs),
        Just(FactoringAlgorithm::Nfs),
        Just(FactoringAlgorithm::Other),
    ]
}

fn size() -> impl Strategy<Value = (Option<BitLength>, Option<u32>)> {
    (1u32..5000, -4i64..=4, 0u8..3).prop_map(|(digits, skew, which)| {
        let derived = i64::from(digits_to_bits(digits).unwrap().get());
        let bits = BitLength::new((derived + skew).max(2) as u32).ok();
        match which {
            0 => (bits, None),
            1 => (None, Some(digits)),
            _ => (bits, Some(digits)),
        }
    })
}

fn positive() -> impl Strategy<Value = Option<f64>> {
    prop::option::of(1e-6f64..1e12)
}

fn record() -> impl Strategy<Value = FactoringRecord> {
    (
        "[A-Za-z][A-Za-z0-9 ,\"-]{0,12}",
        size(),
        (1900i32..2500, 1u8..=12),
        positive(),
        positive(),
        algorithm(),
    )
        .prop_map(|(name, (bits, decimal_digits), (y, m), wall_hours, mips_years, algorithm)| {
            FactoringRecord {
                name,
                bits,
                decimal_digits,
                date_factored: CalendarDate::new(y, m).unwrap(),
                wall_hours,
                mips_years,
                algorithm,
            }
        })
}

proptest! {
    #[test]
    fn serialize_then_load_round_trips(mut records in prop::collection::vec(record(), 0..20)) {
        for (i, r) in records.iter_mut().enumerate() {
            r.name = format!("{}#{i}", r.name);
        }
        records.sort_by_key(|r| r.date_factored);
        let text = serialize_records(&records);
        let loaded = load_records(&text).unwrap();
        prop_assert_eq!(&loaded, &records);
        prop_assert_eq!(serialize_records(&loaded), text);
    }

    #[test]
    fn digits_to_bits_is_monotone(d in 1u32..100_000) {
        prop_assert!(digits_to_bits(d + 1).unwrap() >= digits_to_bits(d).unwrap());
    }

    #[test]
    fn exact_exponential_data_is_recovered(
        a in 10.0f64..5000.0,
        b in prop_oneof![-0.2f64..-0.001, 0.001f64..0.2],
        start in 1950.0f64..2050.0,
        gaps in prop::collection::vec(0.1f64..5.0, 2..30),
    ) {
        let mut t = start;
        let mut points = vec![(t, a)];
        for g in gaps {
            t += g;
            points.push((t, a * (b * (t - start)).exp()));
        }
        let fit = fit_exponential(&points).unwrap();
        prop_assert!(((fit.a - a) / a).abs() <= 1e-9, "a {} vs {}", fit.a, a);
        prop_assert!(((fit.b - b) / b).abs() <= 1e-9, "b {} vs {}", fit.b, b);
        prop_assert_eq!(fit.t0, start);
        prop_assert!(fit.residuals.iter().all(|r| r.abs() <= 1e-9));
    }
}

#[test]
fn bundled_dataset_round_trips() {
    let records = bundled_records();
    assert_eq!(load_records(&serialize_records(&records)).unwrap(), records);
}

#[test]
fn bundled_dataset_ratio_facts() {
    let records = bundled_records();
    let h1999 = hours_for(&records, 512, 1999).unwrap();
    let h2015 = hours_for(&records, 512, 2015).unwrap();
    let h768 = hours_for(&records, 768, 2009).unwrap();
    assert_eq!(h1999 / h2015, 1260.0);
    assert!(((h768 / h1999) / 4.29 - 1.0).abs() <= 0.005);
}

#[test]
fn bundled_trend_grows() {
    let fit = fit_trend(&bundled_records()).unwrap();
    assert!(fit.b > 0.0);
    assert_eq!(fit.residuals.len(), 8);
}

#[test]
fn malformed_files_name_the_line() {
    let text = "name,bits,decimal_digits,date_factored,wall_hours,mips_years,algorithm\n\
                RSA-100,330,100,1991-04,,7,MPQS\n\
                RSA-110,abc,110,1992-04,,75,MPQS\n";
    let err = load_records(text).unwrap_err().to_string();
    assert!(err.contains("line 3"), "{err}");

    let dup = "name,bits,decimal_digits,date_factored,wall_hours,mips_years,algorithm\n\
               X,512,,2000,,,NFS\nX,512,,2000,,,NFS\n";
    assert!(load_records(dup).is_err());

    let inconsistent = "name,bits,decimal_digits,date_factored,wall_hours,mips_years,algorithm\n\
                        X,1024,155,2000,,,NFS\n";
    assert!(load_records(inconsistent).is_err());
}
