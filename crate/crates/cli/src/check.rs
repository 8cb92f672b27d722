//! `distqa check`: parse without evaluating.
//!
//! Exits 2 if the dataset has any malformed line (the first one only under
//! `--strict`), 1 if the metric file does not parse or validate.

use anyhow::{anyhow, Context};
use distqa_core::dsl::{parse_metric_file, validate_plan};
use distqa_core::engine::available_workers;
use distqa_core::rdf::{load_path, LoadError};
use distqa_core::{ErrorPolicy, EvaluationContext};

use crate::config::RunConfig;
use crate::{status, CheckArgs, CmdResult, Failure};

const MAX_LISTED: usize = 20;

pub fn run(args: CheckArgs) -> CmdResult {
    let mut code = status::OK;
    if let Some(path) = &args.metrics {
        let cfg = RunConfig::load(args.config.as_deref())?;
        let ctx = EvaluationContext::from_overrides(&cfg.context).context("configuration error")?;
        let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        match parse_metric_file(&src) {
            Err(d) => {
                eprintln!("{}:{d}\n{}", path.display(), d.render(&src));
                code = status::CONFIG;
            }
            Ok(file) => {
                for w in &file.warnings {
                    eprintln!("{}:{w}", path.display());
                }
                let mut ok = 0;
                for m in &file.metrics {
                    let diags = validate_plan(&m.parsed, &ctx);
                    for d in &diags {
                        eprintln!("{}:{d}\n{}", path.display(), d.render(&src));
                    }
                    if diags.iter().any(|d| d.is_error()) {
                        code = status::CONFIG;
                    } else {
                        ok += 1;
                    }
                }
                println!("{}: {} metric(s), {ok} valid", path.display(), file.metrics.len());
            }
        }
    }
    if let Some(path) = &args.input {
        let policy = if args.strict {
            ErrorPolicy::Strict
        } else {
            ErrorPolicy::SkipAndCount
        };
        let d = match load_path(path, policy, available_workers()) {
            Ok(d) => d,
            Err(e @ LoadError::Parse(_)) => return Err(Failure::parse(anyhow!("{}: {e}", path.display()))),
            Err(e) => return Err(Failure::config(anyhow!("{}: {e}", path.display()))),
        };
        let r = &d.report;
        for e in r.errors.iter().take(MAX_LISTED) {
            eprintln!("{}: {e}", path.display());
        }
        if r.errors.len() > MAX_LISTED {
            eprintln!("{}: ... {} more", path.display(), r.errors.len() - MAX_LISTED);
        }
        println!(
            "{}: {} line(s), {} triple(s), {} malformed, {} blank or comment",
            path.display(),
            r.lines_total,
            r.triples_ok,
            r.lines_skipped,
            r.lines_empty
        );
        if r.lines_skipped > 0 {
            code = status::PARSE;
        }
    }
    Ok(code)
}
