use std::collections::BTreeSet;

use regex::RegexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::vocab::{CC, DCTERMS, DC_ELEMENTS, FOAF, RDFS_LABEL, RDF_TYPE, SCHEMA, SKOS, XHTML_VOCAB};
use crate::xsd::DatatypeRegistry;

#[derive(Debug, Error)]
pub enum ContextError {
    #[error("uri_length_threshold must be positive")]
    ZeroThreshold,
    #[error("invalid license phrase pattern: {0}")]
    Pattern(#[from] regex::Error),
}

/// Every parameter a rule may consult.
#[derive(Debug, Clone)]
pub struct EvaluationContext {
    internal_prefixes: Vec<String>,
    license_predicates: BTreeSet<String>,
    license_indication_predicates: BTreeSet<String>,
    license_phrase_patterns: Vec<String>,
    license_phrases: RegexSet,
    label_predicates: BTreeSet<String>,
    type_predicates: BTreeSet<String>,
    uri_length_threshold: usize,
    datatypes: DatatypeRegistry,
}

/// Serializable overrides; `None` keeps the default.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub internal_prefixes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub license_predicates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub license_indication_predicates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub license_phrase_patterns: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_predicates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub type_predicates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uri_length_threshold: Option<usize>,
}

impl ContextOverrides {
    /// Fields set in `other` win.
    pub fn merge(mut self, other: ContextOverrides) -> ContextOverrides {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            internal_prefixes,
            license_predicates,
            license_indication_predicates,
            license_phrase_patterns,
            label_predicates,
            type_predicates,
            uri_length_threshold
        );
        self
    }
}

fn iris(ns_locals: &[(&str, &str)]) -> BTreeSet<String> {
    ns_locals.iter().map(|(ns, local)| format!("{ns}{local}")).collect()
}

fn compile_phrases(patterns: &[String]) -> Result<RegexSet, regex::Error> {
    RegexSet::new(patterns.iter().map(|p| format!("(?i){p}")))
}

impl Default for EvaluationContext {
    fn default() -> Self {
        let license_phrase_patterns: Vec<String> = ["licen[sc]e", "copyright", "all rights reserved"]
            .into_iter()
            .map(String::from)
            .collect();
        EvaluationContext {
            internal_prefixes: Vec::new(),
            license_predicates: iris(&[
                (DCTERMS, "license"),
                (DCTERMS, "rights"),
                (CC, "license"),
                (XHTML_VOCAB, "license"),
                (SCHEMA, "license"),
            ]),
            license_indication_predicates: iris(&[
                (DCTERMS, "rights"),
                (DC_ELEMENTS, "rights"),
                (DCTERMS, "licenseDocument"),
            ]),
            license_phrases: compile_phrases(&license_phrase_patterns).expect("default patterns compile"),
            license_phrase_patterns,
            label_predicates: [
                RDFS_LABEL.to_string(),
                format!("{SKOS}prefLabel"),
                format!("{SKOS}altLabel"),
                format!("{FOAF}name"),
                format!("{DCTERMS}title"),
            ]
            .into_iter()
            .collect(),
            type_predicates: [RDF_TYPE.to_string()].into_iter().collect(),
            uri_length_threshold: 95,
            datatypes: DatatypeRegistry::default(),
        }
    }
}

impl EvaluationContext {
    pub fn with_internal_prefixes<I, S>(mut self, prefixes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.internal_prefixes = prefixes.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_uri_length_threshold(mut self, threshold: usize) -> Result<Self, ContextError> {
        if threshold == 0 {
            return Err(ContextError::ZeroThreshold);
        }
        self.uri_length_threshold = threshold;
        Ok(self)
    }

    pub fn with_datatypes(mut self, datatypes: DatatypeRegistry) -> Self {
        self.datatypes = datatypes;
        self
    }

    pub fn apply(mut self, o: &ContextOverrides) -> Result<Self, ContextError> {
        if let Some(v) = &o.internal_prefixes {
            self.internal_prefixes = v.clone();
        }
        if let Some(v) = &o.license_predicates {
            self.license_predicates = v.iter().cloned().collect();
        }
        if let Some(v) = &o.license_indication_predicates {
            self.license_indication_predicates = v.iter().cloned().collect();
        }
        if let Some(v) = &o.license_phrase_patterns {
            self.license_phrases = compile_phrases(v)?;
            self.license_phrase_patterns = v.clone();
        }
        if let Some(v) = &o.label_predicates {
            self.label_predicates = v.iter().cloned().collect();
        }
        if let Some(v) = &o.type_predicates {
            self.type_predicates = v.iter().cloned().collect();
        }
        if let Some(t) = o.uri_length_threshold {
            self = self.with_uri_length_threshold(t)?;
        }
        Ok(self)
    }

    pub fn from_overrides(o: &ContextOverrides) -> Result<Self, ContextError> {
        EvaluationContext::default().apply(o)
    }

    /// Snapshot of the effective parameters, for run manifests.
    pub fn to_overrides(&self) -> ContextOverrides {
        ContextOverrides {
            internal_prefixes: Some(self.internal_prefixes.clone()),
            license_predicates: Some(self.license_predicates.iter().cloned().collect()),
            license_indication_predicates: Some(self.license_indication_predicates.iter().cloned().collect()),
            license_phrase_patterns: Some(self.license_phrase_patterns.clone()),
            label_predicates: Some(self.label_predicates.iter().cloned().collect()),
            type_predicates: Some(self.type_predicates.iter().cloned().collect()),
            uri_length_threshold: Some(self.uri_length_threshold),
        }
    }

    pub fn internal_prefixes(&self) -> &[String] {
        &self.internal_prefixes
    }

    pub fn uri_length_threshold(&self) -> usize {
        self.uri_length_threshold
    }

    pub fn datatypes(&self) -> &DatatypeRegistry {
        &self.datatypes
    }

    pub fn is_internal(&self, iri: &str) -> bool {
        self.internal_prefixes.iter().any(|p| iri.starts_with(p.as_str()))
    }

    pub fn is_license_predicate(&self, iri: &str) -> bool {
        self.license_predicates.contains(iri)
    }

    pub fn is_license_indication_predicate(&self, iri: &str) -> bool {
        self.license_indication_predicates.contains(iri)
    }

    pub fn is_label_predicate(&self, iri: &str) -> bool {
        self.label_predicates.contains(iri)
    }

    pub fn is_type_predicate(&self, iri: &str) -> bool {
        self.type_predicates.contains(iri)
    }

    pub fn is_license_phrase(&self, lexical: &str) -> bool {
        self.license_phrases.is_match(lexical)
    }

    /// Name of the parameter a rule needs, when it is empty.
    pub(crate) fn missing_parameter(&self, kind: super::RuleKind) -> Option<&'static str> {
        use super::RuleKind::*;
        let (name, empty) = match kind {
            IsInternal | IsExternal => ("internal_prefixes", self.internal_prefixes.is_empty()),
            IsLabeled => ("label_predicates", self.label_predicates.is_empty()),
            HasLicenceAssociated => ("license_predicates", self.license_predicates.is_empty()),
            HasLicenceIndications => (
                "license_indication_predicates",
                self.license_indication_predicates.is_empty(),
            ),
            IsLicenseStatement => ("license_phrase_patterns", self.license_phrase_patterns.is_empty()),
            HasType => ("type_predicates", self.type_predicates.is_empty()),
            _ => return None,
        };
        empty.then_some(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let ctx = EvaluationContext::default();
        assert!(ctx.is_license_predicate("http://purl.org/dc/terms/license"));
        assert!(ctx.is_license_indication_predicate("http://purl.org/dc/elements/1.1/rights"));
        assert!(ctx.is_label_predicate(RDFS_LABEL));
        assert_eq!(ctx.uri_length_threshold(), 95);
        assert!(ctx.is_license_phrase("All Rights Reserved"));
        assert!(ctx.is_license_phrase("Licenced under CC-BY"));
        assert!(!ctx.is_license_phrase("public domain"));
        assert!(ctx.internal_prefixes().is_empty());
    }

    #[test]
    fn overrides_from_json() {
        let o: ContextOverrides = serde_json::from_str(
            r#"{"internal_prefixes": ["http://ex.org/"], "uri_length_threshold": 10, "license_phrase_patterns": ["cc-by"]}"#,
        )
        .unwrap();
        let ctx = EvaluationContext::from_overrides(&o).unwrap();
        assert!(ctx.is_internal("http://ex.org/a"));
        assert!(!ctx.is_internal("http://other.org/a"));
        assert_eq!(ctx.uri_length_threshold(), 10);
        assert!(ctx.is_license_phrase("CC-BY 4.0"));
        assert!(!ctx.is_license_phrase("copyright"));

        let bad = ContextOverrides {
            uri_length_threshold: Some(0),
            ..Default::default()
        };
        assert!(matches!(
            EvaluationContext::from_overrides(&bad),
            Err(ContextError::ZeroThreshold)
        ));
        assert!(serde_json::from_str::<ContextOverrides>(r#"{"nope": 1}"#).is_err());
    }

    #[test]
    fn merge_prefers_later_values() {
        let a = ContextOverrides {
            uri_length_threshold: Some(10),
            internal_prefixes: Some(vec!["a:".into()]),
            ..Default::default()
        };
        let b = ContextOverrides {
            uri_length_threshold: Some(20),
            ..Default::default()
        };
        let m = a.merge(b);
        assert_eq!(m.uri_length_threshold, Some(20));
        assert_eq!(m.internal_prefixes, Some(vec!["a:".to_string()]));
    }
}
