//! `distqa bench-sizeup` and `distqa bench-speedup`.
//!
//! Both write CSV with fixed headers:
//!
//! - size-up: `size,workers,runs,mean_seconds,std_seconds,parse_seconds`
//! - speedup: `workers,runs,mean_seconds,std_seconds,speedup,efficiency`

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use distqa_core::benchmark::{self, bench_context, generated_dataset, write_csv, SPEEDUP_MIN_TRIPLES};
use distqa_core::engine::available_workers;
use distqa_core::rdf::load_path;
use distqa_core::{ErrorPolicy, EvaluationContext};

use crate::config::RunConfig;
use crate::metrics::{resolve, split_list};
use crate::{status, CmdResult, SizeupArgs, SpeedupArgs};

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn sizeup(args: SizeupArgs) -> CmdResult {
    let metrics = resolve(Some(&split_list(&args.metrics)?), Path::new("."))?;
    let workers = if args.workers == 0 {
        available_workers()
    } else {
        args.workers
    };
    let rows = benchmark::sizeup(&args.sizes, &metrics, workers, args.seed, |r| {
        eprintln!(
            "size {}: mean {:.3}s, std {:.3}s, parse {:.3}s",
            r.size, r.mean_seconds, r.std_seconds, r.parse_seconds
        )
    })?;
    write_csv(&rows, output(args.out.as_deref())?)?;
    Ok(status::OK)
}

pub fn speedup(args: SpeedupArgs) -> CmdResult {
    let metrics = resolve(Some(&split_list(&args.metrics)?), Path::new("."))?;
    let (dataset, ctx) = match &args.input {
        Some(path) => {
            let cfg = RunConfig::load(args.config.as_deref())?;
            let ctx = EvaluationContext::from_overrides(&cfg.context).context("configuration error")?;
            let d = load_path(path, ErrorPolicy::SkipAndCount, available_workers())
                .with_context(|| format!("loading {}", path.display()))?;
            (d, ctx)
        }
        None => {
            let n = args.n_triples.unwrap_or(SPEEDUP_MIN_TRIPLES);
            (generated_dataset(n, args.seed, available_workers())?.0, bench_context())
        }
    };
    if dataset.len() < SPEEDUP_MIN_TRIPLES {
        eprintln!(
            "warning: {} triples is below {SPEEDUP_MIN_TRIPLES}; overhead will dominate the speedup figures",
            dataset.len()
        );
    }
    let cores = available_workers();
    if let Some(&max) = args.workers.iter().max() {
        if max > cores {
            eprintln!("warning: {max} workers requested but only {cores} core(s) available");
        }
    }
    let rows = benchmark::speedup(&dataset, &metrics, &ctx, &args.workers, |r| {
        eprintln!(
            "workers {}: mean {:.3}s, S {:.3}, E {:.3}",
            r.workers, r.mean_seconds, r.speedup, r.efficiency
        )
    })?;
    write_csv(&rows, output(args.out.as_deref())?)?;
    Ok(status::OK)
}
