//! `distqa assess`: load, evaluate, report.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use chrono::{DateTime, Utc};
use distqa_core::dqv::{dqvify, format_timestamp, to_ntriples, value_literal, DEFAULT_BASE};
use distqa_core::engine::MetricFailure;
use distqa_core::qap::ContextOverrides;
use distqa_core::rdf::{load_path, LoadError};
use distqa_core::{
    assess, Assessment, AssessmentConfig, Dataset, EngineMode, ErrorPolicy, EvaluationContext, MetricDefinition,
    MetricResult, ValueKind,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::metrics::{resolve, split_list};
use crate::{status, AssessArgs, CmdResult, Failure};

#[derive(Debug, Serialize)]
struct CsvRow<'a> {
    metric: &'a str,
    value: String,
    value_kind: ValueKind,
    flags: String,
    counts: String,
    wall_time_seconds: f64,
}

#[derive(Debug, Serialize)]
struct JsonResult<'a> {
    metric: &'a str,
    value: f64,
    value_kind: ValueKind,
    flags: Vec<&'static str>,
    counts: &'a [u64],
    action_counts: &'a BTreeMap<String, u64>,
    wall_time_seconds: f64,
}

#[derive(Debug, Serialize)]
struct JsonReport<'a> {
    dataset: &'a str,
    triples: usize,
    /// Duplicate statements counted once.
    distinct_triples: usize,
    timestamp: String,
    results: Vec<JsonResult<'a>>,
    failures: &'a [MetricFailure],
}

#[derive(Debug, Serialize)]
struct ConfigSnapshot<'a> {
    config_file: Option<&'a Path>,
    metrics: &'a [MetricDefinition],
    context: ContextOverrides,
    workers: usize,
    partitions: Option<usize>,
    mode: EngineMode,
    strict: bool,
    timeout_seconds: Option<f64>,
}

#[derive(Debug, Serialize)]
struct DatasetInfo<'a> {
    path: &'a Path,
    triples: usize,
    distinct_triples: usize,
    lines_skipped: u64,
}

#[derive(Debug, Serialize)]
struct MetricTiming<'a> {
    metric: &'a str,
    wall_time_seconds: f64,
}

/// Everything needed to reproduce a run, written next to its outputs.
#[derive(Debug, Serialize)]
struct RunManifest<'a> {
    distqa_version: &'static str,
    timestamp: String,
    config: ConfigSnapshot<'a>,
    dataset: DatasetInfo<'a>,
    workers: usize,
    partitions: usize,
    mode: EngineMode,
    parse_seconds: f64,
    assessment_seconds: f64,
    metric_wall_times: Vec<MetricTiming<'a>>,
    failed_metrics: Vec<&'a str>,
    results_file: Option<&'a Path>,
    dqv_file: Option<&'a Path>,
}

struct Loaded {
    dataset: Dataset,
    parse_time: Duration,
    assessment: Assessment,
}

pub fn run(args: AssessArgs) -> CmdResult {
    let mut cfg = RunConfig::load(args.config.as_deref())?;
    if !args.internal_prefixes.is_empty() {
        cfg.context.internal_prefixes = Some(args.internal_prefixes.clone());
    }
    let metrics = match &args.metrics {
        Some(v) => resolve(Some(&split_list(v)?), Path::new("."))?,
        None => resolve(cfg.metrics.as_deref(), &cfg.base_dir)?,
    };
    let context = EvaluationContext::from_overrides(&cfg.context).context("configuration error")?;
    let mut config = AssessmentConfig::new(metrics, context);
    config.workers = args.workers.or(cfg.workers).unwrap_or(0);
    config.partitions = args.partitions.or(cfg.partitions);
    if config.partitions == Some(0) {
        return Err(Failure::config(anyhow!(
            "configuration error: partitions must be positive"
        )));
    }
    config.mode = if args.shared_scan {
        EngineMode::SharedScan
    } else {
        cfg.mode.unwrap_or_default()
    };
    let timestamp = match &args.timestamp {
        Some(s) => DateTime::parse_from_rfc3339(s)
            .with_context(|| format!("invalid --timestamp {s:?}"))?
            .with_timezone(&Utc),
        None => Utc::now(),
    };
    let timeout = match args.timeout {
        Some(s) if !(s.is_finite() && s > 0.0) => {
            return Err(Failure::config(anyhow!(
                "--timeout must be a positive number of seconds"
            )))
        }
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    let policy = if args.strict {
        ErrorPolicy::Strict
    } else {
        ErrorPolicy::SkipAndCount
    };

    let loaded = with_timeout(timeout, {
        let config = config.clone();
        let input = args.input.clone();
        move || load_and_assess(&input, policy, &config)
    })?;
    let Loaded {
        dataset,
        parse_time,
        assessment,
    } = loaded;

    if dataset.report.lines_skipped > 0 {
        eprintln!(
            "warning: skipped {} malformed line(s); first: {}",
            dataset.report.lines_skipped,
            dataset
                .report
                .errors
                .first()
                .map(ToString::to_string)
                .unwrap_or_default()
        );
    }
    for r in &assessment.results {
        for f in &r.flags {
            eprintln!("warning: {}: {}", r.id, f.as_str());
        }
    }

    let stamp = format_timestamp(&timestamp);
    match &args.out {
        Some(path) if is_json(path) => {
            let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            serde_json::to_writer_pretty(f, &json_report(&dataset, &assessment, &stamp))?;
        }
        Some(path) => {
            let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&assessment.results, f)?;
        }
        None => write_csv(&assessment.results, std::io::stdout().lock())?,
    }

    if let Some(path) = &args.dqv {
        let dataset_iri = match args.dataset_iri.clone().or(cfg.dataset_iri.clone()) {
            Some(iri) => iri,
            None => file_iri(&args.input)?,
        };
        let base = args
            .dqv_base
            .as_deref()
            .or(cfg.dqv_base.as_deref())
            .unwrap_or(DEFAULT_BASE);
        let graph = dqvify(&assessment.results, &dataset_iri, base, &timestamp)?;
        std::fs::write(path, to_ntriples(&graph)).with_context(|| format!("writing {}", path.display()))?;
    }

    let manifest_path = args
        .manifest
        .clone()
        .or_else(|| args.out.as_deref().map(sidecar))
        .or_else(|| args.dqv.as_deref().map(sidecar));
    if let Some(path) = manifest_path {
        let manifest = RunManifest {
            distqa_version: env!("CARGO_PKG_VERSION"),
            timestamp: stamp.clone(),
            config: ConfigSnapshot {
                config_file: args.config.as_deref(),
                metrics: &config.metrics,
                context: config.context.to_overrides(),
                workers: config.workers,
                partitions: config.partitions,
                mode: config.mode,
                strict: args.strict,
                timeout_seconds: args.timeout,
            },
            dataset: DatasetInfo {
                path: &args.input,
                triples: dataset.len(),
                distinct_triples: dataset.distinct_len(),
                lines_skipped: dataset.report.lines_skipped,
            },
            workers: assessment.workers,
            partitions: assessment.partitions,
            mode: assessment.mode,
            parse_seconds: parse_time.as_secs_f64(),
            assessment_seconds: assessment.wall_time.as_secs_f64(),
            metric_wall_times: assessment
                .results
                .iter()
                .map(|r| MetricTiming {
                    metric: &r.id,
                    wall_time_seconds: r.wall_time.as_secs_f64(),
                })
                .collect(),
            failed_metrics: assessment.failures.iter().map(|f| f.id.as_str()).collect(),
            results_file: args.out.as_deref(),
            dqv_file: args.dqv.as_deref(),
        };
        let f = std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        serde_json::to_writer_pretty(f, &manifest)?;
    }

    if assessment.failures.is_empty() {
        return Ok(status::OK);
    }
    for f in &assessment.failures {
        let issues: Vec<&str> = f.issues.iter().map(|i| i.message.as_str()).collect();
        eprintln!("error: metric {} was not evaluated: {}", f.id, issues.join("; "));
    }
    Ok(status::CONFIG)
}

fn load_and_assess(input: &Path, policy: ErrorPolicy, config: &AssessmentConfig) -> Result<Loaded, Failure> {
    let start = Instant::now();
    let dataset = match load_path(input, policy, config.effective_workers()) {
        Ok(d) => d,
        Err(e @ LoadError::Parse(_)) => return Err(Failure::parse(anyhow!("{}: {e}", input.display()))),
        Err(e) => return Err(Failure::config(anyhow!("{}: {e}", input.display()))),
    };
    let parse_time = start.elapsed();
    let assessment = assess(config, &dataset)?;
    Ok(Loaded {
        dataset,
        parse_time,
        assessment,
    })
}

/// Runs `job` on its own thread and stops waiting after `limit`. The caller
/// exits the process on timeout, which ends the abandoned thread.
fn with_timeout<T: Send + 'static>(
    limit: Option<Duration>,
    job: impl FnOnce() -> Result<T, Failure> + Send + 'static,
) -> Result<T, Failure> {
    let Some(limit) = limit else {
        return job();
    };
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(job());
    });
    match rx.recv_timeout(limit) {
        Ok(r) => r,
        Err(_) => Err(Failure {
            code: status::TIMEOUT,
            error: anyhow!("timed out after {:.3}s", limit.as_secs_f64()),
        }),
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_csv<W: Write>(results: &[MetricResult], out: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in results {
        w.serialize(CsvRow {
            metric: &r.id,
            value: value_literal(r).0,
            value_kind: r.value_kind,
            flags: r.flags.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(";"),
            counts: r.counts.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
            wall_time_seconds: r.wall_time.as_secs_f64(),
        })?;
    }
    w.flush()?;
    Ok(())
}

fn json_report<'a>(d: &'a Dataset, a: &'a Assessment, stamp: &str) -> JsonReport<'a> {
    JsonReport {
        dataset: &d.origin,
        triples: d.len(),
        distinct_triples: d.distinct_len(),
        timestamp: stamp.to_string(),
        results: a
            .results
            .iter()
            .map(|r| JsonResult {
                metric: &r.id,
                value: r.value,
                value_kind: r.value_kind,
                flags: r.flags.iter().map(|f| f.as_str()).collect(),
                counts: &r.counts,
                action_counts: &r.action_counts,
                wall_time_seconds: r.wall_time.as_secs_f64(),
            })
            .collect(),
        failures: &a.failures,
    }
}

/// `file:` IRI for a local path, percent-encoding anything outside the
/// unreserved set.
fn file_iri(path: &Path) -> anyhow::Result<String> {
    let abs = std::fs::canonicalize(path).with_context(|| format!("resolving {}", path.display()))?;
    let mut iri = String::from("file://");
    for b in abs.to_string_lossy().bytes() {
        if b.is_ascii_alphanumeric() || b"-._~/".contains(&b) {
            iri.push(b as char);
        } else {
            iri.push_str(&format!("%{b:02X}"));
        }
    }
    Ok(iri)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_appends() {
        assert_eq!(
            sidecar(Path::new("out/r.csv")),
            PathBuf::from("out/r.csv.manifest.json")
        );
    }

    #[test]
    fn json_extension() {
        assert!(is_json(Path::new("a.JSON")));
        assert!(!is_json(Path::new("a.csv")));
        assert!(!is_json(Path::new("json")));
    }

    #[test]
    fn file_iris_are_escaped() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a b.nt");
        std::fs::write(&p, "").unwrap();
        let iri = file_iri(&p).unwrap();
        assert!(iri.starts_with("file:///") && iri.ends_with("/a%20b.nt"), "{iri}");
    }

    #[test]
    fn timeout_reports_its_status() {
        let r: Result<(), Failure> = with_timeout(Some(Duration::from_millis(10)), || {
            std::thread::sleep(Duration::from_secs(5));
            Ok(())
        });
        assert_eq!(r.unwrap_err().code, status::TIMEOUT);
        assert_eq!(with_timeout(None, || Ok(7)).unwrap(), 7);
    }
}
