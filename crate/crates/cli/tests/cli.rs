use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use distqa_core::rdf::{parse_dataset, ErrorPolicy};

fn distqa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distqa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn d1() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/d1.nt")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// (metric, value) pairs from the results CSV.
fn values(csv_text: &str) -> Vec<(String, String)> {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        ["metric", "value", "value_kind", "flags", "counts", "wall_time_seconds"]
    );
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].to_string(), rec[1].to_string())
        })
        .collect()
}

#[test]
fn d1_license_and_linkage() {
    let o = distqa(&[
        "assess",
        "--input",
        s(&d1()),
        "--metrics",
        "L1,I2",
        "--internal-prefix",
        "http://ex.org/",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        values(&stdout(&o)),
        [("L1".into(), "1.0".into()), ("I2".into(), "0.4".into())]
    );
}

#[test]
fn empty_metric_list_is_a_configuration_error() {
    let o = distqa(&["assess", "--input", s(&d1()), "--metrics", ""]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("empty metric list"));
}

#[test]
fn unknown_metric_and_missing_parameter() {
    let o = distqa(&["assess", "--input", s(&d1()), "--metrics", "L9"]);
    assert_eq!(code(&o), 1);
    let o = distqa(&["assess", "--input", s(&d1()), "--metrics", "I2"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("internal_prefixes"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_do_not_use_the_parse_status() {
    assert_eq!(code(&distqa(&["assess"])), 1);
    assert_eq!(code(&distqa(&["frobnicate"])), 1);
    assert_eq!(code(&distqa(&["--help"])), 0);
}

#[test]
fn worker_count_does_not_change_values() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("g.nt");
    let o = distqa(&["gen", "--out", s(&data), "--n-triples", "3000", "--seed", "5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let run = |workers: &str, extra: &[&str]| {
        let mut args = vec![
            "assess",
            "--input",
            s(&data),
            "--internal-prefix",
            "http://gen.example.org/",
            "--workers",
            workers,
        ];
        args.extend_from_slice(extra);
        let o = distqa(&args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        values(&stdout(&o))
    };
    let one = run("1", &[]);
    assert_eq!(one.len(), 7);
    assert_eq!(one, run("8", &[]));
    assert_eq!(one, run("3", &["--partitions", "17", "--shared-scan"]));
}

#[test]
fn strict_parse_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.nt");
    std::fs::write(
        &bad,
        "<http://ex.org/a> <http://ex.org/p> <http://ex.org/b> .\nnot a triple\n",
    )
    .unwrap();
    let o = distqa(&["assess", "--input", s(&bad), "--metrics", "CN2", "--strict"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = distqa(&["assess", "--input", s(&bad), "--metrics", "CN2"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("skipped 1 malformed line"));
    assert_eq!(values(&stdout(&o)), [("CN2".into(), "0.0".into())]);

    assert_eq!(code(&distqa(&["check", "--input", s(&bad)])), 2);
    assert_eq!(code(&distqa(&["check", "--input", s(&d1())])), 0);
}

#[test]
fn missing_input_is_not_a_parse_failure() {
    let o = distqa(&["assess", "--input", "/nonexistent/x.nt", "--metrics", "L1", "--strict"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn timeout_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("big.nt");
    assert_eq!(code(&distqa(&["gen", "--out", s(&data), "--n-triples", "400000"])), 0);
    let o = distqa(&[
        "assess",
        "--input",
        s(&data),
        "--internal-prefix",
        "http://gen.example.org/",
        "--timeout",
        "0.001",
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("timed out"));
    assert_eq!(
        code(&distqa(&[
            "assess",
            "--input",
            s(&d1()),
            "--metrics",
            "L1",
            "--timeout",
            "-1"
        ])),
        1
    );
}

#[test]
fn outputs_manifest_and_dqv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let dqv = dir.path().join("r.nt");
    let args = |dqv_path: &Path| {
        vec![
            "assess".to_string(),
            "--input".into(),
            s(&d1()).into(),
            "--internal-prefix".into(),
            "http://ex.org/".into(),
            "--out".into(),
            s(&out).into(),
            "--dqv".into(),
            s(dqv_path).into(),
            "--dataset-iri".into(),
            "http://ex.org/dataset/d1".into(),
            "--timestamp".into(),
            "2024-01-01T00:00:00Z".into(),
        ]
    };
    let run = |dqv_path: &Path| {
        let a = args(dqv_path);
        let o = distqa(&a.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    };
    run(&dqv);

    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["triples"], 5);
    assert_eq!(report["results"].as_array().unwrap().len(), 7);
    assert_eq!(report["results"][2]["metric"], "I2");
    assert_eq!(report["results"][2]["value"], 0.4);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["dataset"]["triples"], 5);
    assert_eq!(manifest["dataset"]["distinct_triples"], 5);
    assert_eq!(manifest["mode"], "per-metric");
    assert_eq!(manifest["timestamp"], "2024-01-01T00:00:00.000Z");
    assert_eq!(manifest["metric_wall_times"].as_array().unwrap().len(), 7);
    assert_eq!(manifest["config"]["context"]["internal_prefixes"][0], "http://ex.org/");
    assert!(manifest["workers"].as_u64().unwrap() >= 1);

    let text = std::fs::read(&dqv).unwrap();
    let g = parse_dataset(&text[..], "dqv", ErrorPolicy::Strict).unwrap();
    assert_eq!(g.len(), 35);
    let again = dir.path().join("again.nt");
    run(&again);
    assert_eq!(
        std::fs::read(&again).unwrap(),
        text,
        "frozen timestamp gives identical DQV"
    );
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("custom.qm"),
        "metric LABELLED \"labelled subjects\" := count(isLabeled(?p)) / count(triples)\n",
    )
    .unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"metrics": ["L1", "custom.qm"], "context": {"internal_prefixes": ["http://ex.org/"]}, "workers": 2, "mode": "shared-scan"}"#,
    )
    .unwrap();
    let out = dir.path().join("r.csv");
    let o = distqa(&["assess", "--input", s(&d1()), "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let got = values(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(
        got.iter().map(|(m, _)| m.as_str()).collect::<Vec<_>>(),
        ["L1", "LABELLED"]
    );
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["mode"], "shared-scan");
    assert_eq!(manifest["config"]["workers"], 2);

    let o = distqa(&[
        "assess",
        "--input",
        s(&d1()),
        "--config",
        s(&cfg),
        "--metrics",
        "I2",
        "--workers",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        values(&std::fs::read_to_string(&out).unwrap()),
        [("I2".into(), "0.4".into())]
    );

    std::fs::write(&cfg, r#"{"metricz": []}"#).unwrap();
    assert_eq!(code(&distqa(&["assess", "--input", s(&d1()), "--config", s(&cfg)])), 1);
}

#[test]
fn plan_failures_still_write_other_results() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m.qm");
    std::fs::write(
        &file,
        "metric DEAD \"dead links\" := count(isBroken(?o)) / count(triples)\n",
    )
    .unwrap();
    let out = dir.path().join("r.csv");
    let o = distqa(&[
        "assess",
        "--input",
        s(&d1()),
        "--metrics",
        &format!("L1,{}", s(&file)),
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("DEAD was not evaluated"), "{}", stderr(&o));
    assert_eq!(
        values(&std::fs::read_to_string(&out).unwrap()),
        [("L1".into(), "1.0".into())]
    );

    assert_eq!(code(&distqa(&["check", "--metrics", s(&file)])), 1);
}

#[test]
fn generator_closed_loop() {
    let dir = tempfile::tempdir().unwrap();
    let profiles: [&[&str]; 4] = [
        &[
            "--seed",
            "42",
            "--n-triples",
            "1000",
            "--fraction-external-links",
            "0.2",
        ],
        &[
            "--seed",
            "1",
            "--n-triples",
            "777",
            "--include-license",
            "false",
            "--fraction-literals",
            "0.5",
        ],
        &[
            "--seed",
            "9",
            "--n-triples",
            "5000",
            "--long-uri-fraction",
            "0.3",
            "--fraction-malformed-typed-literals",
            "0.4",
        ],
        &[
            "--seed",
            "3",
            "--n-triples",
            "10",
            "--fraction-external-links",
            "0",
            "--fraction-literals",
            "0",
        ],
    ];
    for (i, flags) in profiles.iter().enumerate() {
        let data = dir.path().join(format!("g{i}.nt"));
        let mut args = vec!["gen", "--out", s(&data)];
        args.extend_from_slice(flags);
        let o = distqa(&args);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let manifest: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("g{i}.nt.manifest.json"))).unwrap())
                .unwrap();
        let o = distqa(&[
            "assess",
            "--input",
            s(&data),
            "--internal-prefix",
            "http://gen.example.org/",
            "--out",
            s(&dir.path().join("r.json")),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let report: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
        for r in report["results"].as_array().unwrap() {
            let id = r["metric"].as_str().unwrap();
            if let Some(expected) = manifest["expected"].get(id) {
                assert_eq!(r["value"].as_f64(), expected.as_f64(), "profile {i}, {id}");
            }
        }
        if i == 0 {
            assert_eq!(manifest["counts"]["external_links"], 200);
            assert_eq!(manifest["expected"]["I2"], 0.2);
        }
        if i == 1 {
            assert_eq!(manifest["expected"]["L1"], 0.0);
        }
    }
}

#[test]
fn generator_is_deterministic_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.nt");
    let b = dir.path().join("b.nt");
    for p in [&a, &b] {
        assert_eq!(
            code(&distqa(&["gen", "--out", s(p), "--seed", "11", "--n-triples", "2000"])),
            0
        );
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let profile = dir.path().join("p.json");
    std::fs::write(&profile, r#"{"seed": 11, "n_triples": 2000}"#).unwrap();
    assert_eq!(code(&distqa(&["gen", "--out", s(&b), "--profile", s(&profile)])), 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let o = distqa(&["gen", "--out", s(&a), "--fraction-literals", "1.5"]);
    assert_eq!(code(&o), 1);
    let o = distqa(&[
        "gen",
        "--out",
        s(&a),
        "--fraction-literals",
        "0.7",
        "--fraction-external-links",
        "0.5",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn bench_commands_write_documented_csv() {
    let o = distqa(&["bench-sizeup", "--sizes", "500,1000", "--workers", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("size,workers,runs,mean_seconds,std_seconds,parse_seconds\n"));
    assert_eq!(text.lines().count(), 3);

    assert_eq!(code(&distqa(&["bench-sizeup", "--sizes", "1000,500"])), 1);
    assert_eq!(code(&distqa(&["bench-sizeup", "--sizes", ""])), 1);

    let o = distqa(&["bench-speedup", "--n-triples", "2000", "--workers", "1,2,4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("below 1000000"));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "workers",
            "runs",
            "mean_seconds",
            "std_seconds",
            "speedup",
            "efficiency"
        ]
    );
    let rows: Vec<Vec<f64>> = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][4], 1.0);
    for row in &rows {
        assert!((row[5] * row[0] - row[4]).abs() <= 1e-12 * row[4]);
    }
}
