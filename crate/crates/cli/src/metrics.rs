//! Turning `--metrics` items into metric definitions.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use distqa_core::dsl::parse_metric_file;
use distqa_core::{builtins, registry_lookup, MetricDefinition};

/// Splits a comma-separated `--metrics` value. An empty value is an error,
/// not "no filter".
pub fn split_list(value: &str) -> anyhow::Result<Vec<String>> {
    let items: Vec<String> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    if items.is_empty() {
        bail!("configuration error: empty metric list");
    }
    Ok(items)
}

/// Each item is a path to a metric file if one exists there, otherwise a
/// built-in id. `None` selects every built-in.
pub fn resolve(items: Option<&[String]>, base_dir: &Path) -> anyhow::Result<Vec<MetricDefinition>> {
    let Some(items) = items else {
        return Ok(builtins());
    };
    if items.is_empty() {
        bail!("configuration error: empty metric list");
    }
    let mut out = Vec::new();
    for item in items {
        let path = if Path::new(item).is_absolute() {
            PathBuf::from(item)
        } else {
            base_dir.join(item)
        };
        if path.is_file() {
            out.extend(load_file(&path)?);
        } else {
            out.push(registry_lookup(item).context("configuration error")?);
        }
    }
    Ok(out)
}

pub fn load_file(path: &Path) -> anyhow::Result<Vec<MetricDefinition>> {
    let src = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = match parse_metric_file(&src) {
        Ok(f) => f,
        Err(d) => bail!("{}: {}\n{}", path.display(), d, d.render(&src)),
    };
    for w in &file.warnings {
        eprintln!("{}: {}", path.display(), w);
    }
    Ok(file
        .metrics
        .into_iter()
        .map(|m| MetricDefinition::custom(m.name, m.description, m.parsed.expr))
        .collect())
}
