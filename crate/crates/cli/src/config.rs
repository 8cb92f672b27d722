//! The JSON configuration file.
//!
//! ```json
//! {
//!   "metrics": ["L1", "I2", "metrics/custom.qm"],
//!   "context": { "internal_prefixes": ["http://example.org/"], "uri_length_threshold": 95 },
//!   "workers": 4,
//!   "partitions": 8,
//!   "mode": "shared-scan",
//!   "dataset_iri": "http://example.org/dataset",
//!   "dqv_base": "http://example.org/quality/"
//! }
//! ```
//!
//! Every field is optional. Relative metric file paths resolve against the
//! configuration file's directory.

use std::path::{Path, PathBuf};

use anyhow::Context;
use distqa_core::qap::ContextOverrides;
use distqa_core::EngineMode;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Vec<String>>,
    #[serde(default)]
    pub context: ContextOverrides,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitions: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<EngineMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_iri: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dqv_base: Option<String>,
    /// Directory that relative metric paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<RunConfig> {
        let Some(path) = path else {
            return Ok(RunConfig {
                base_dir: PathBuf::from("."),
                ..RunConfig::default()
            });
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut c: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        c.base_dir = path.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_config_parses() {
        let c: RunConfig = serde_json::from_str(
            r#"{"metrics":["L1"],"context":{"internal_prefixes":["http://ex.org/"]},"workers":2,"mode":"shared-scan"}"#,
        )
        .unwrap();
        assert_eq!(c.mode, Some(EngineMode::SharedScan));
        assert_eq!(
            c.context.internal_prefixes.as_deref(),
            Some(&["http://ex.org/".to_string()][..])
        );
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"metric":["L1"]}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"context":{"prefixes":[]}}"#).is_err());
    }
}
