//! Data-parallel quality assessment of RDF datasets.
//!
//! Metrics are built from a small algebra (filters, rules, transformations,
//! count actions and arithmetic), written either in Rust or in a text DSL,
//! and evaluated over partitions of an N-Triples dataset in parallel.

pub mod benchmark;
pub mod dqv;
pub mod dsl;
pub mod engine;
pub mod generator;
pub mod metrics;
pub mod qap;
pub mod rdf;
pub mod xsd;

pub use engine::{
    assess, assess_shared_scan, AssessError, Assessment, AssessmentConfig, EngineMode, MetricResult, ResultFlag,
};
pub use metrics::{builtin, builtins, registry_lookup, MetricDefinition, ValueKind};
pub use qap::{EvaluationContext, MetricExpr};
pub use rdf::{Dataset, ErrorPolicy, Term, Triple};
