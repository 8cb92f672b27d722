//! `distqa gen`: synthetic datasets with known metric values.

use std::path::Path;

use anyhow::Context;
use distqa_core::generator::{generate_ntriples, GeneratorProfile};
use serde::Deserialize;

use crate::{status, CmdResult, GenArgs};

/// A profile file may set any subset of the fields.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartialProfile {
    seed: Option<u64>,
    n_triples: Option<u64>,
    fraction_external_links: Option<f64>,
    fraction_literals: Option<f64>,
    fraction_malformed_typed_literals: Option<f64>,
    include_license: Option<bool>,
    long_uri_fraction: Option<f64>,
}

impl PartialProfile {
    fn over(self, mut p: GeneratorProfile) -> GeneratorProfile {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { p.$f = v; } )* };
        }
        set!(
            seed,
            n_triples,
            fraction_external_links,
            fraction_literals,
            fraction_malformed_typed_literals,
            include_license,
            long_uri_fraction
        );
        p
    }
}

fn load_profile(path: Option<&Path>) -> anyhow::Result<PartialProfile> {
    let Some(path) = path else {
        return Ok(PartialProfile::default());
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading profile {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid profile {}", path.display()))
}

pub fn run(args: GenArgs) -> CmdResult {
    let from_file = load_profile(args.profile.as_deref())?;
    let from_flags = PartialProfile {
        seed: args.seed,
        n_triples: args.n_triples,
        fraction_external_links: args.fraction_external_links,
        fraction_literals: args.fraction_literals,
        fraction_malformed_typed_literals: args.fraction_malformed_typed_literals,
        include_license: args.include_license,
        long_uri_fraction: args.long_uri_fraction,
    };
    let profile = from_flags.over(from_file.over(GeneratorProfile::default()));
    let (text, manifest) = generate_ntriples(&profile).context("invalid profile")?;
    std::fs::write(&args.out, text).with_context(|| format!("writing {}", args.out.display()))?;
    let mut manifest_path = args.out.into_os_string();
    manifest_path.push(".manifest.json");
    let f = std::fs::File::create(&manifest_path)
        .with_context(|| format!("creating {}", manifest_path.to_string_lossy()))?;
    serde_json::to_writer_pretty(f, &manifest)?;
    Ok(status::OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_override_defaults() {
        let file: PartialProfile = serde_json::from_str(r#"{"seed": 7, "n_triples": 50}"#).unwrap();
        let flags = PartialProfile {
            n_triples: Some(60),
            ..PartialProfile::default()
        };
        let p = flags.over(file.over(GeneratorProfile::default()));
        assert_eq!((p.seed, p.n_triples), (7, 60));
        assert_eq!(p.fraction_literals, GeneratorProfile::default().fraction_literals);
    }

    #[test]
    fn unknown_profile_keys_rejected() {
        assert!(serde_json::from_str::<PartialProfile>(r#"{"triples": 5}"#).is_err());
    }
}
