//! Assessment results as a DQV graph.

use std::collections::BTreeSet;

use chrono::{DateTime, SecondsFormat, Utc};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::engine::MetricResult;
use crate::metrics::ValueKind;
use crate::rdf::ntriples::write_ntriples;
use crate::rdf::vocab::{DQV, PROV, RDF_TYPE, XSD_DATE_TIME, XSD_DOUBLE, XSD_INTEGER};
use crate::rdf::{Dataset, Term, TermError, Triple};

pub const DEFAULT_BASE: &str = "http://distqa.example.org/quality/";

#[derive(Debug, Error)]
pub enum DqvError {
    #[error("no results to report")]
    Empty,
    #[error("invalid IRI {iri:?}: {source}")]
    Iri { iri: String, source: TermError },
    #[error("metric '{0}' appears twice")]
    DuplicateMetric(String),
}

fn iri(s: String) -> Result<Term, DqvError> {
    Term::iri(s.as_str()).map_err(|source| DqvError::Iri { iri: s, source })
}

/// `xsd:dateTime` lexical form, UTC, millisecond precision.
pub fn format_timestamp(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Lexical form and datatype of a result value.
pub fn value_literal(r: &MetricResult) -> (String, &'static str) {
    match r.value_kind {
        ValueKind::Count => (format!("{}", r.value as i64), XSD_INTEGER),
        ValueKind::Indicator | ValueKind::Ratio => (format!("{:?}", r.value), XSD_DOUBLE),
    }
}

/// First 16 hex digits of SHA-256 over origin and timestamp.
pub fn content_hash(origin: &str, timestamp: &str) -> String {
    let digest = Sha256::new()
        .chain_update(origin)
        .chain_update([0u8])
        .chain_update(timestamp)
        .finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Five triples per result: type, metric, dataset, value, generation time.
pub fn dqvify(
    results: &[MetricResult],
    dataset_iri: &str,
    base: &str,
    at: &DateTime<Utc>,
) -> Result<Dataset, DqvError> {
    if results.is_empty() {
        return Err(DqvError::Empty);
    }
    let dataset = iri(dataset_iri.to_string())?;
    let stamp = format_timestamp(at);
    let rdf_type = iri(RDF_TYPE.into())?;
    let measurement_class = iri(format!("{DQV}QualityMeasurement"))?;
    let is_measurement_of = iri(format!("{DQV}isMeasurementOf"))?;
    let computed_on = iri(format!("{DQV}computedOn"))?;
    let value = iri(format!("{DQV}value"))?;
    let generated_at = iri(format!("{PROV}generatedAtTime"))?;
    let time = Term::typed(stamp.as_str(), XSD_DATE_TIME).expect("datatype IRI is valid");

    let mut seen = BTreeSet::new();
    let mut triples = Vec::with_capacity(results.len() * 5);
    for r in results {
        if !seen.insert(r.id.as_str()) {
            return Err(DqvError::DuplicateMetric(r.id.clone()));
        }
        let m = iri(format!("{base}{}-{}", r.id, content_hash(&r.origin, &stamp)))?;
        let metric = iri(format!("{base}{}", r.id))?;
        let (lexical, datatype) = value_literal(r);
        let v = Term::typed(lexical, datatype).expect("datatype IRI is valid");
        for (p, o) in [
            (&rdf_type, measurement_class.clone()),
            (&is_measurement_of, metric),
            (&computed_on, dataset.clone()),
            (&value, v),
            (&generated_at, time.clone()),
        ] {
            triples.push(Triple::new(m.clone(), p.clone(), o).expect("IRI subject and predicate"));
        }
    }
    Ok(Dataset::from_triples("dqv", triples))
}

/// N-Triples text, one line per triple.
pub fn to_ntriples(d: &Dataset) -> String {
    let mut out = String::new();
    write_ntriples(&mut out, &d.triples);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{assess, AssessmentConfig};
    use crate::metrics::builtins;
    use crate::qap::eval::tests::{d1, d1_ctx};
    use crate::rdf::{parse_dataset, ErrorPolicy};

    fn results() -> Vec<MetricResult> {
        let mut c = AssessmentConfig::new(builtins(), d1_ctx());
        c.workers = 1;
        assess(&c, &d1()).unwrap().results
    }

    fn frozen() -> DateTime<Utc> {
        "2024-01-02T03:04:05Z".parse().unwrap()
    }

    #[test]
    fn template_and_round_trip() {
        let rs = results();
        let g = dqvify(&rs, "http://ex.org/dataset", DEFAULT_BASE, &frozen()).unwrap();
        assert_eq!(g.len(), 35);
        let subjects: std::collections::HashSet<_> = g.triples.iter().map(|t| t.subject().clone()).collect();
        assert_eq!(subjects.len(), 7);
        let text = to_ntriples(&g);
        let back = parse_dataset(text.as_bytes(), "x", ErrorPolicy::Strict).unwrap();
        assert_eq!(back.report.lines_skipped, 0);
        assert_eq!(back.triples, g.triples);

        let one = dqvify(&rs[..1], "http://ex.org/dataset", DEFAULT_BASE, &frozen()).unwrap();
        assert_eq!(one.len(), 5);
    }

    #[test]
    fn value_typing() {
        let rs = results();
        assert_eq!(value_literal(&rs[0]), ("1.0".to_string(), XSD_DOUBLE));
        assert_eq!(value_literal(&rs[2]), ("0.4".to_string(), XSD_DOUBLE));
        assert_eq!(value_literal(&rs[5]), ("1".to_string(), XSD_INTEGER));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            dqvify(&[], "http://ex.org/d", DEFAULT_BASE, &frozen()),
            Err(DqvError::Empty)
        ));
        let rs = results();
        assert!(matches!(
            dqvify(&rs, "not an iri", DEFAULT_BASE, &frozen()),
            Err(DqvError::Iri { .. })
        ));
        let dup = vec![rs[0].clone(), rs[0].clone()];
        assert!(matches!(
            dqvify(&dup, "http://ex.org/d", DEFAULT_BASE, &frozen()),
            Err(DqvError::DuplicateMetric(_))
        ));
    }
}
