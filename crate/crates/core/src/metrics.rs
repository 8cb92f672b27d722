//! Built-in metric definitions.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::qap::{Filter, MetricExpr, RuleKind, Transformation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dimension {
    Licensing,
    Interlinking,
    Understandability,
    RepresentationalConciseness,
    SyntacticValidity,
    Conciseness,
    /// User-defined metrics.
    Custom,
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimension::Licensing => "licensing",
            Dimension::Interlinking => "interlinking",
            Dimension::Understandability => "understandability",
            Dimension::RepresentationalConciseness => "representational-conciseness",
            Dimension::SyntacticValidity => "syntactic-validity",
            Dimension::Conciseness => "conciseness",
            Dimension::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    /// 0 or 1.
    Indicator,
    Ratio,
    Count,
}

impl ValueKind {
    /// Kind of a user-defined expression, judged by its shape.
    pub fn infer(expr: &MetricExpr) -> ValueKind {
        match expr {
            MetricExpr::Positive(_) => ValueKind::Indicator,
            MetricExpr::Action(_) => ValueKind::Count,
            _ => ValueKind::Ratio,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricDefinition {
    pub id: String,
    pub name: String,
    pub dimension: Dimension,
    #[serde(serialize_with = "serialize_expr")]
    pub expr: MetricExpr,
    pub value_kind: ValueKind,
}

fn serialize_expr<S: serde::Serializer>(expr: &MetricExpr, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(expr)
}

impl MetricDefinition {
    pub fn custom(id: impl Into<String>, name: impl Into<String>, expr: MetricExpr) -> MetricDefinition {
        MetricDefinition {
            id: id.into(),
            name: name.into(),
            dimension: Dimension::Custom,
            value_kind: ValueKind::infer(&expr),
            expr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown metric '{0}'; built-in metrics are L1, L2, I2, U1, RC1, SV3, CN2")]
pub struct UnknownMetric(pub String);

pub const BUILTIN_IDS: [&str; 7] = ["L1", "L2", "I2", "U1", "RC1", "SV3", "CN2"];

fn rule(kind: RuleKind, f: Filter) -> Transformation {
    Transformation::rule(kind, f)
}

use Filter::{Objects as O, Predicates as P, Subjects as S};
use RuleKind::*;

fn all_of(parts: impl IntoIterator<Item = Transformation>) -> Transformation {
    parts.into_iter().reduce(Transformation::and).expect("non-empty")
}

fn expr_of(id: &str) -> Option<MetricExpr> {
    let triples = MetricExpr::count_triples;
    Some(match id {
        "L1" => MetricExpr::count(rule(HasLicenceAssociated, P)).positive(),
        "L2" => MetricExpr::count(all_of([
            rule(IsUri, S),
            rule(HasLicenceIndications, P),
            rule(IsLiteral, O),
            rule(IsLicenseStatement, O),
        ]))
        .positive(),
        "I2" => {
            let r1 = all_of([rule(IsIri, S), rule(IsInternal, S), rule(IsIri, O), rule(IsExternal, O)]);
            let r2 = all_of([rule(IsIri, S), rule(IsExternal, S), rule(IsIri, O), rule(IsInternal, O)]);
            MetricExpr::count(r1.or(r2)) / triples()
        }
        "U1" => {
            let r1 = all_of([rule(IsUri, S), rule(IsInternal, S), rule(IsLabeled, P)]);
            let r2 = all_of([rule(IsInternal, P), rule(IsLabeled, P)]);
            let r3 = all_of([rule(IsUri, O), rule(IsInternal, O), rule(IsLabeled, P)]);
            (MetricExpr::count(r1) + MetricExpr::count(r2) + MetricExpr::count(r3)) / triples()
        }
        "RC1" => {
            let any_uri = rule(IsUri, S).or(rule(IsUri, P)).or(rule(IsUri, O));
            MetricExpr::count(any_uri.and(rule(ResTooLong, S.or(P).or(O)))) / triples()
        }
        "SV3" => MetricExpr::count(all_of([
            rule(IsLiteral, O),
            rule(GetDatatype, O),
            Transformation::Rule(crate::qap::Rule::new(IsLexicalFormCompatibleWithDatatype, O).negate()),
        ])),
        "CN2" => (triples() - MetricExpr::count(rule(IsUri, S).and(rule(IsUri, O)))) / triples(),
        _ => return None,
    })
}

/// A built-in metric by id (case-sensitive).
pub fn builtin(id: &str) -> Option<MetricDefinition> {
    let (name, dimension, value_kind) = match id {
        "L1" => ("Machine-readable license", Dimension::Licensing, ValueKind::Indicator),
        "L2" => ("Human-readable license", Dimension::Licensing, ValueKind::Indicator),
        "I2" => (
            "Linkage degree of linked external data providers",
            Dimension::Interlinking,
            ValueKind::Ratio,
        ),
        "U1" => ("Human-readable labels", Dimension::Understandability, ValueKind::Ratio),
        "RC1" => ("Short URIs", Dimension::RepresentationalConciseness, ValueKind::Ratio),
        "SV3" => (
            "Literals with malformed datatypes",
            Dimension::SyntacticValidity,
            ValueKind::Count,
        ),
        "CN2" => ("Extensional conciseness", Dimension::Conciseness, ValueKind::Ratio),
        _ => return None,
    };
    Some(MetricDefinition {
        id: id.to_string(),
        name: name.to_string(),
        dimension,
        expr: expr_of(id)?,
        value_kind,
    })
}

pub fn registry_lookup(id: &str) -> Result<MetricDefinition, UnknownMetric> {
    builtin(id).ok_or_else(|| UnknownMetric(id.to_string()))
}

/// All built-in metrics in canonical order.
pub fn builtins() -> Vec<MetricDefinition> {
    BUILTIN_IDS
        .iter()
        .map(|id| builtin(id).expect("listed ids exist"))
        .collect()
}
