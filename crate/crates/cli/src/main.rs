//! `distqa`: quality assessment of N-Triples datasets.

mod assess;
mod bench;
mod check;
mod config;
mod gen;
mod metrics;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit statuses. Usage errors share the configuration status so that 2
/// always means a strict-mode parse failure.
pub mod status {
    pub const OK: u8 = 0;
    pub const CONFIG: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const TIMEOUT: u8 = 3;
}

/// An error together with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn config(error: impl Into<anyhow::Error>) -> Failure {
        Failure {
            code: status::CONFIG,
            error: error.into(),
        }
    }

    pub fn parse(error: impl Into<anyhow::Error>) -> Failure {
        Failure {
            code: status::PARSE,
            error: error.into(),
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::config(e)
    }
}

pub type CmdResult = Result<u8, Failure>;

#[derive(Debug, Parser)]
#[command(
    name = "distqa",
    version,
    about = "Partition-parallel quality assessment for RDF datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate quality metrics on a dataset.
    Assess(AssessArgs),
    /// Write a synthetic dataset and its ground-truth manifest.
    Gen(GenArgs),
    /// Time assessments over growing dataset sizes.
    BenchSizeup(SizeupArgs),
    /// Time one dataset over several worker counts.
    BenchSpeedup(SpeedupArgs),
    /// Parse a dataset and/or a metric file without evaluating anything.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct AssessArgs {
    /// N-Triples input.
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated built-in ids and/or metric definition files.
    #[arg(long)]
    pub metrics: Option<String>,
    /// JSON configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Namespace treated as internal; repeatable. Replaces the config's list.
    #[arg(long = "internal-prefix")]
    pub internal_prefixes: Vec<String>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Partitions (defaults to the worker count).
    #[arg(long)]
    pub partitions: Option<usize>,
    /// Evaluate all metrics in one pass per partition.
    #[arg(long)]
    pub shared_scan: bool,
    /// Write the results as a DQV graph in N-Triples.
    #[arg(long)]
    pub dqv: Option<PathBuf>,
    /// IRI of the assessed dataset in the DQV output.
    #[arg(long)]
    pub dataset_iri: Option<String>,
    /// Namespace for measurement and metric IRIs.
    #[arg(long)]
    pub dqv_base: Option<String>,
    /// Results file; `.json` writes JSON, anything else CSV. Defaults to CSV on stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run manifest location (default: next to --out, else next to --dqv).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Abort on the first malformed line.
    #[arg(long)]
    pub strict: bool,
    /// Give up after this many seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Timestamp recorded in the outputs (RFC 3339); defaults to now.
    #[arg(long)]
    pub timestamp: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Output N-Triples file; the manifest goes to `<out>.manifest.json`.
    #[arg(long)]
    pub out: PathBuf,
    /// JSON generator profile; flags override its values.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n_triples: Option<u64>,
    #[arg(long)]
    pub fraction_external_links: Option<f64>,
    #[arg(long)]
    pub fraction_literals: Option<f64>,
    #[arg(long)]
    pub fraction_malformed_typed_literals: Option<f64>,
    #[arg(long)]
    pub include_license: Option<bool>,
    #[arg(long)]
    pub long_uri_fraction: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SizeupArgs {
    /// Strictly ascending dataset sizes, in triples.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value = "L1,I2,RC1")]
    pub metrics: String,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// CSV output; defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpeedupArgs {
    /// Dataset to time; generated from --n-triples when absent.
    #[arg(long, conflicts_with = "n_triples")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub n_triples: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    pub workers: Vec<usize>,
    #[arg(long, default_value = "L1,L2,I2,U1,RC1,SV3,CN2")]
    pub metrics: String,
    /// JSON configuration for the evaluation context.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, required_unless_present = "metrics")]
    pub input: Option<PathBuf>,
    /// Metric definition file to parse and validate.
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub strict: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { status::CONFIG } else { status::OK });
        }
    };
    let outcome = match cli.command {
        Command::Assess(a) => assess::run(a),
        Command::Gen(a) => gen::run(a),
        Command::BenchSizeup(a) => bench::sizeup(a),
        Command::BenchSpeedup(a) => bench::speedup(a),
        Command::Check(a) => check::run(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
