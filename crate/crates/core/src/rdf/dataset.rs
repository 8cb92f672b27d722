use std::collections::HashSet;
use std::io::{self, BufRead};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::ntriples::{LineParser, ParseError};
use super::term::Triple;

/// What to do with a malformed line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorPolicy {
    /// The first malformed line aborts the load.
    Strict,
    /// Malformed lines are recorded in the report and skipped.
    #[default]
    SkipAndCount,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    pub lines_total: u64,
    pub triples_ok: u64,
    pub lines_skipped: u64,
    /// Blank and comment-only lines.
    pub lines_empty: u64,
    pub errors: Vec<ParseError>,
}

impl ParseReport {
    fn record(&mut self, outcome: Result<Option<Triple>, ParseError>, triples: &mut Vec<Triple>) {
        self.lines_total += 1;
        match outcome {
            Ok(Some(t)) => {
                self.triples_ok += 1;
                triples.push(t);
            }
            Ok(None) => self.lines_empty += 1,
            Err(e) => {
                self.lines_skipped += 1;
                self.errors.push(e);
            }
        }
    }

    fn absorb(&mut self, other: ParseReport, line_offset: u64) {
        self.lines_total += other.lines_total;
        self.triples_ok += other.triples_ok;
        self.lines_skipped += other.lines_skipped;
        self.lines_empty += other.lines_empty;
        self.errors.extend(other.errors.into_iter().map(|mut e| {
            e.line += line_offset;
            e
        }));
    }
}

/// An in-memory bag of triples in source order.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub triples: Vec<Triple>,
    pub origin: String,
    pub report: ParseReport,
}

impl Dataset {
    pub fn from_triples(origin: impl Into<String>, triples: Vec<Triple>) -> Dataset {
        let n = triples.len() as u64;
        Dataset {
            triples,
            origin: origin.into(),
            report: ParseReport {
                lines_total: n,
                triples_ok: n,
                ..ParseReport::default()
            },
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Number of distinct statements; `len()` counts duplicates.
    pub fn distinct_len(&self) -> usize {
        self.triples.iter().collect::<HashSet<_>>().len()
    }
}

/// Reads N-Triples line by line.
pub fn parse_dataset<R: BufRead>(mut source: R, origin: &str, policy: ErrorPolicy) -> Result<Dataset, LoadError> {
    let mut parser = LineParser::default();
    let mut triples = Vec::new();
    let mut report = ParseReport::default();
    let mut buf = Vec::with_capacity(256);
    loop {
        buf.clear();
        if source.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        let outcome = parser.parse_bytes(&buf, report.lines_total + 1);
        if policy == ErrorPolicy::Strict {
            if let Err(e) = outcome {
                return Err(e.into());
            }
        }
        report.record(outcome, &mut triples);
    }
    Ok(Dataset {
        triples,
        origin: origin.to_string(),
        report,
    })
}

/// Parses an in-memory N-Triples document, splitting it into `workers`
/// line-aligned byte ranges parsed concurrently. Triple order and line
/// numbers are those of the sequential parse.
pub fn parse_bytes(bytes: &[u8], origin: &str, policy: ErrorPolicy, workers: usize) -> Result<Dataset, LoadError> {
    let chunks = split_lines(bytes, workers.max(1));
    let parsed: Vec<(Vec<Triple>, ParseReport)> = chunks
        .par_iter()
        .map(|chunk| {
            let mut parser = LineParser::default();
            let mut triples = Vec::new();
            let mut report = ParseReport::default();
            for line in chunk.split_inclusive(|&b| b == b'\n') {
                let outcome = parser.parse_bytes(line, report.lines_total + 1);
                let failed = outcome.is_err();
                report.record(outcome, &mut triples);
                if failed && policy == ErrorPolicy::Strict {
                    break;
                }
            }
            (triples, report)
        })
        .collect();

    let mut triples = Vec::with_capacity(parsed.iter().map(|(t, _)| t.len()).sum());
    let mut report = ParseReport::default();
    for (chunk_triples, chunk_report) in parsed {
        let offset = report.lines_total;
        if policy == ErrorPolicy::Strict {
            if let Some(e) = chunk_report.errors.first() {
                let mut e = e.clone();
                e.line += offset;
                return Err(e.into());
            }
        }
        report.absorb(chunk_report, offset);
        triples.extend(chunk_triples);
    }
    Ok(Dataset {
        triples,
        origin: origin.to_string(),
        report,
    })
}

pub fn load_path(path: &Path, policy: ErrorPolicy, workers: usize) -> Result<Dataset, LoadError> {
    let bytes = std::fs::read(path)?;
    parse_bytes(&bytes, &path.display().to_string(), policy, workers)
}

fn split_lines(bytes: &[u8], parts: usize) -> Vec<&[u8]> {
    let mut chunks = Vec::with_capacity(parts);
    let target = bytes.len().div_ceil(parts).max(1);
    let mut start = 0;
    while start < bytes.len() {
        let mut end = (start + target).min(bytes.len());
        if end < bytes.len() {
            end = match bytes[end..].iter().position(|&b| b == b'\n') {
                Some(i) => end + i + 1,
                None => bytes.len(),
            };
        }
        chunks.push(&bytes[start..end]);
        start = end;
    }
    chunks
}
