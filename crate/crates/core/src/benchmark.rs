//! Size-up and speedup measurements.
//!
//! Each configuration is timed over [`RUNS`] assessments and the mean is
//! reported. Only the evaluation stage is timed; parsing is reported in its
//! own column.

use std::io::Write;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::engine::{assess, AssessError, AssessmentConfig};
use crate::generator::{generate_ntriples, GeneratorProfile, ProfileError, INTERNAL_PREFIX};
use crate::metrics::MetricDefinition;
use crate::qap::EvaluationContext;
use crate::rdf::{parse_bytes, Dataset, ErrorPolicy, LoadError};

pub const RUNS: usize = 3;

/// Below this size, speedup figures are dominated by overhead.
pub const SPEEDUP_MIN_TRIPLES: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no sizes given")]
    NoSizes,
    #[error("no worker counts given")]
    NoWorkers,
    #[error("sizes must be strictly ascending")]
    Unsorted,
    #[error("worker counts must be positive")]
    ZeroWorkers,
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Assess(#[from] AssessError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timing {
    pub mean_seconds: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std_seconds: f64,
}

impl Timing {
    pub fn of(samples: &[Duration]) -> Timing {
        let xs: Vec<f64> = samples.iter().map(Duration::as_secs_f64).collect();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std = if xs.len() < 2 {
            0.0
        } else {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Timing {
            mean_seconds: mean,
            std_seconds: std,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeupRow {
    pub size: usize,
    pub workers: usize,
    pub runs: usize,
    pub mean_seconds: f64,
    pub std_seconds: f64,
    pub parse_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedupRow {
    pub workers: usize,
    pub runs: usize,
    pub mean_seconds: f64,
    pub std_seconds: f64,
    /// Single-worker time over this row's time.
    pub speedup: f64,
    /// Speedup per worker.
    pub efficiency: f64,
}

/// Profile used for benchmark datasets of a given size.
pub fn bench_profile(n: usize, seed: u64) -> GeneratorProfile {
    GeneratorProfile {
        seed,
        n_triples: n as u64,
        fraction_external_links: 0.2,
        fraction_literals: 0.3,
        fraction_malformed_typed_literals: 0.05,
        include_license: true,
        long_uri_fraction: 0.01,
    }
}

pub fn bench_context() -> EvaluationContext {
    EvaluationContext::default().with_internal_prefixes([INTERNAL_PREFIX])
}

/// Generates, serializes and parses a dataset; returns it with the parse time.
pub fn generated_dataset(n: usize, seed: u64, workers: usize) -> Result<(Dataset, Duration), BenchError> {
    let (text, _) = generate_ntriples(&bench_profile(n, seed))?;
    let start = Instant::now();
    let d = parse_bytes(text.as_bytes(), &format!("generated-{n}"), ErrorPolicy::Strict, workers)?;
    Ok((d, start.elapsed()))
}

/// Times `runs` assessments of `metrics` on `d`.
pub fn time_assessment(
    d: &Dataset,
    metrics: &[MetricDefinition],
    ctx: &EvaluationContext,
    workers: usize,
    runs: usize,
) -> Result<Timing, BenchError> {
    let mut config = AssessmentConfig::new(metrics.to_vec(), ctx.clone());
    config.workers = workers;
    let mut samples = Vec::with_capacity(runs);
    for _ in 0..runs {
        let a = assess(&config, d)?;
        samples.push(a.wall_time);
    }
    Ok(Timing::of(&samples))
}

pub fn sizeup(
    sizes: &[usize],
    metrics: &[MetricDefinition],
    workers: usize,
    seed: u64,
    mut progress: impl FnMut(&SizeupRow),
) -> Result<Vec<SizeupRow>, BenchError> {
    if sizes.is_empty() {
        return Err(BenchError::NoSizes);
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::Unsorted);
    }
    if workers == 0 {
        return Err(BenchError::ZeroWorkers);
    }
    let ctx = bench_context();
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let (d, parse) = generated_dataset(size, seed, workers)?;
        let t = time_assessment(&d, metrics, &ctx, workers, RUNS)?;
        let row = SizeupRow {
            size,
            workers,
            runs: RUNS,
            mean_seconds: t.mean_seconds,
            std_seconds: t.std_seconds,
            parse_seconds: parse.as_secs_f64(),
        };
        progress(&row);
        rows.push(row);
    }
    Ok(rows)
}

/// Times each worker count; a single-worker baseline is measured even when
/// `workers` does not list 1.
pub fn speedup(
    d: &Dataset,
    metrics: &[MetricDefinition],
    ctx: &EvaluationContext,
    workers: &[usize],
    mut progress: impl FnMut(&SpeedupRow),
) -> Result<Vec<SpeedupRow>, BenchError> {
    if workers.is_empty() {
        return Err(BenchError::NoWorkers);
    }
    if workers.contains(&0) {
        return Err(BenchError::ZeroWorkers);
    }
    let baseline = if workers.contains(&1) {
        None
    } else {
        Some(time_assessment(d, metrics, ctx, 1, RUNS)?.mean_seconds)
    };
    let mut timings = Vec::with_capacity(workers.len());
    for &n in workers {
        timings.push((n, time_assessment(d, metrics, ctx, n, RUNS)?));
    }
    let t1 = baseline.unwrap_or_else(|| timings.iter().find(|(n, _)| *n == 1).expect("listed").1.mean_seconds);
    let rows = timings
        .into_iter()
        .map(|(n, t)| {
            let s = t1 / t.mean_seconds;
            SpeedupRow {
                workers: n,
                runs: RUNS,
                mean_seconds: t.mean_seconds,
                std_seconds: t.std_seconds,
                speedup: s,
                efficiency: s / n as f64,
            }
        })
        .collect::<Vec<_>>();
    rows.iter().for_each(&mut progress);
    Ok(rows)
}

pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Least-squares line through the points: (slope, intercept, R²).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::builtin;

    #[test]
    fn timing_statistics() {
        let t = Timing::of(&[Duration::from_secs(1), Duration::from_secs(2), Duration::from_secs(3)]);
        assert_eq!(t.mean_seconds, 2.0);
        assert_eq!(t.std_seconds, 1.0);
        assert_eq!(Timing::of(&[Duration::from_secs(4)]).std_seconds, 0.0);
    }

    #[test]
    fn fit_exact_line() {
        let (m, b, r2) = linear_fit(&[1.0, 2.0, 4.0], &[3.0, 5.0, 9.0]);
        assert!((m - 2.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn argument_checks() {
        let m = vec![builtin("L1").unwrap()];
        assert!(matches!(sizeup(&[], &m, 1, 1, |_| {}), Err(BenchError::NoSizes)));
        assert!(matches!(sizeup(&[20, 10], &m, 1, 1, |_| {}), Err(BenchError::Unsorted)));
        let d = Dataset::from_triples("e", vec![]);
        assert!(matches!(
            speedup(&d, &m, &bench_context(), &[], |_| {}),
            Err(BenchError::NoWorkers)
        ));
    }

    #[test]
    fn small_runs_have_documented_shape() {
        let m = vec![builtin("L1").unwrap(), builtin("I2").unwrap()];
        let rows = sizeup(&[100], &m, 1, 7, |_| {}).unwrap();
        assert_eq!(rows.len(), 1);
        let (d, _) = generated_dataset(500, 1, 1).unwrap();
        let rows = speedup(&d, &m, &bench_context(), &[1, 2], |_| {}).unwrap();
        assert_eq!(rows[0].speedup, 1.0);
        for r in &rows {
            assert_eq!(r.efficiency * r.workers as f64, r.speedup);
        }
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("workers,runs,mean_seconds,std_seconds,speedup,efficiency\n"));
    }
}
