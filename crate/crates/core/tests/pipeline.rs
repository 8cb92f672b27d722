mod common;

use chrono::{DateTime, Utc};
use distqa_core::dqv::{dqvify, to_ntriples, DEFAULT_BASE};
use distqa_core::engine::EngineMode;
use distqa_core::rdf::{load_path, parse_dataset, write_ntriples, LoadError};
use distqa_core::{assess, builtins, AssessmentConfig, ErrorPolicy, EvaluationContext, ResultFlag};
use proptest::prelude::*;

fn ctx() -> EvaluationContext {
    EvaluationContext::default().with_internal_prefixes([common::INTERNAL])
}

fn check_against_reference(got: &[f64], want: &[f64; 7]) {
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        assert!((g - w).abs() <= 1e-12 * w.abs().max(1.0), "metric {i}: {g} vs {w}");
    }
}

#[test]
fn file_round_trip_then_assess() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..20 {
        let d = common::random_dataset(seed, 2_000);
        let mut text = String::new();
        write_ntriples(&mut text, &d.triples);
        let path = dir.path().join(format!("{seed}.nt"));
        std::fs::write(&path, &text).unwrap();

        let loaded = load_path(&path, ErrorPolicy::Strict, 3).unwrap();
        assert_eq!(loaded.triples, d.triples);
        let mut config = AssessmentConfig::new(builtins(), ctx());
        config.workers = 2;
        let a = assess(&config, &loaded).unwrap();
        let got: Vec<f64> = a.results.iter().map(|r| r.value).collect();
        check_against_reference(&got, &common::reference(&d));
    }
}

#[test]
fn lenient_load_skips_and_strict_load_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.nt");
    std::fs::write(
        &path,
        "# header\n<http://ex.org/a> <http://ex.org/p> <http://other.org/b> .\n<broken\n\n<http://ex.org/c> <http://www.w3.org/2000/01/rdf-schema#label> \"c\" .\n",
    )
    .unwrap();
    let d = load_path(&path, ErrorPolicy::SkipAndCount, 2).unwrap();
    assert_eq!(d.len(), 2);
    assert_eq!(d.report.lines_skipped, 1);
    assert_eq!(d.report.lines_empty, 2);
    assert_eq!(d.report.errors[0].line, 3);
    assert!(matches!(
        load_path(&path, ErrorPolicy::Strict, 2),
        Err(LoadError::Parse(_))
    ));

    let a = assess(&AssessmentConfig::new(builtins(), ctx()), &d).unwrap();
    let i2 = a.results.iter().find(|r| r.id == "I2").unwrap();
    assert_eq!(i2.value, 0.5);
}

#[test]
fn empty_dataset_flags_zero_denominators() {
    let d = parse_dataset(&b""[..], "empty", ErrorPolicy::Strict).unwrap();
    let a = assess(&AssessmentConfig::new(builtins(), ctx()), &d).unwrap();
    for r in &a.results {
        assert_eq!(r.value, 0.0, "{}", r.id);
    }
    let ratios: Vec<&str> = a
        .results
        .iter()
        .filter(|r| r.flags.contains(&ResultFlag::ZeroDenominator))
        .map(|r| r.id.as_str())
        .collect();
    assert_eq!(ratios, ["I2", "U1", "RC1", "CN2"]);
}

#[test]
fn dqv_of_an_assessment_parses_back() {
    let d = common::random_dataset(3, 500);
    let mut config = AssessmentConfig::new(builtins(), ctx());
    config.mode = EngineMode::SharedScan;
    let a = assess(&config, &d).unwrap();
    let at: DateTime<Utc> = "2025-06-01T12:00:00.5Z".parse().unwrap();
    let g = dqvify(&a.results, "http://ex.org/dataset", DEFAULT_BASE, &at).unwrap();
    let text = to_ntriples(&g);
    assert!(text.contains("\"2025-06-01T12:00:00.500Z\"^^<http://www.w3.org/2001/XMLSchema#dateTime>"));
    let back = parse_dataset(text.as_bytes(), "dqv", ErrorPolicy::Strict).unwrap();
    assert_eq!(back.triples, g.triples);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let d = common::random_dataset(seed, 300);
        let mut text = String::new();
        write_ntriples(&mut text, &d.triples);
        let back = parse_dataset(text.as_bytes(), "rt", ErrorPolicy::Strict).unwrap();
        prop_assert_eq!(back.triples, d.triples);
    }

    #[test]
    fn engine_matches_reference_for_any_worker_count(seed in any::<u64>(), workers in 1usize..6, p in 1usize..12) {
        let d = common::random_dataset(seed, 400);
        let mut config = AssessmentConfig::new(builtins(), ctx());
        config.workers = workers;
        config.partitions = Some(p);
        let got: Vec<f64> = assess(&config, &d).unwrap().results.iter().map(|r| r.value).collect();
        check_against_reference(&got, &common::reference(&d));
    }
}
