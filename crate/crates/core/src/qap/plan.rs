//! Well-formedness of metric plans.

use std::fmt;

use serde::Serialize;

use super::ast::{Filter, MetricExpr, RuleKind, Transformation};
use super::context::EvaluationContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueKind {
    /// Network-dependent rule; suspended.
    SuspendedRule,
    /// Rule with no executable semantics.
    UnsupportedRule,
    MissingFilter,
    NestedDistinct,
    MisplacedDistinct,
    /// Two `distinct` filters in one transformation project different positions.
    MixedProjection,
    /// The context lacks a parameter the rule needs.
    MissingParameter,
}

impl IssueKind {
    /// Configuration problems abort a whole run; the rest fail one metric.
    pub fn is_configuration(self) -> bool {
        self == IssueKind::MissingParameter
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanIssue {
    pub kind: IssueKind,
    /// Source-order index of the offending rule within the metric.
    pub rule_index: Option<usize>,
    pub message: String,
}

impl fmt::Display for PlanIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Context-free checks.
pub fn check_structure(m: &MetricExpr) -> Vec<PlanIssue> {
    let mut issues = Vec::new();
    let mut rule_index = 0;
    for action in m.actions() {
        if let super::Action::Count(t) = action {
            check_transformation(t, &mut rule_index, &mut issues);
        }
    }
    issues
}

/// Structure checks plus the context parameters the rules consult.
pub fn check_plan(m: &MetricExpr, ctx: &EvaluationContext) -> Result<(), Vec<PlanIssue>> {
    let mut issues = check_structure(m);
    for (i, rule) in m.rules().into_iter().enumerate() {
        if let Some(param) = ctx.missing_parameter(rule.kind) {
            issues.push(PlanIssue {
                kind: IssueKind::MissingParameter,
                rule_index: Some(i),
                message: format!("{} requires a non-empty {param} setting", rule.kind.name()),
            });
        }
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(issues)
    }
}

fn check_transformation(t: &Transformation, rule_index: &mut usize, issues: &mut Vec<PlanIssue>) {
    let projection = t.distinct_filter().map(Filter::positions);
    check_node(t, projection, rule_index, issues);
}

fn check_node(t: &Transformation, projection: Option<u8>, rule_index: &mut usize, issues: &mut Vec<PlanIssue>) {
    match t {
        Transformation::Rule(rule) => {
            let idx = *rule_index;
            *rule_index += 1;
            let issue = |kind, message: String| PlanIssue {
                kind,
                rule_index: Some(idx),
                message,
            };
            match rule.kind {
                RuleKind::IsBroken => issues.push(issue(
                    IssueKind::SuspendedRule,
                    "network rule suspended: isBroken needs dereferencing".into(),
                )),
                RuleKind::HasPredicateP => issues.push(issue(
                    IssueKind::UnsupportedRule,
                    "hasPredicateP has no defined argument convention".into(),
                )),
                _ => {}
            }
            match &rule.filter {
                None if rule.kind != RuleKind::HasPredicateP => issues.push(issue(
                    IssueKind::MissingFilter,
                    format!("{} needs a position filter", rule.kind.name()),
                )),
                None => {}
                Some(f) => check_filter(f, projection, Some(idx), issues),
            }
        }
        Transformation::Select(f) => check_filter(f, projection, None, issues),
        Transformation::Intersect(a, b) | Transformation::Union(a, b) => {
            check_node(a, projection, rule_index, issues);
            check_node(b, projection, rule_index, issues);
        }
    }
}

fn check_filter(f: &Filter, projection: Option<u8>, rule_index: Option<usize>, issues: &mut Vec<PlanIssue>) {
    if let Filter::Distinct(inner) = f {
        if projection.is_some_and(|p| p != inner.positions()) {
            issues.push(PlanIssue {
                kind: IssueKind::MixedProjection,
                rule_index,
                message: "all distinct filters in one transformation must project the same positions".into(),
            });
        }
        check_inner(inner, true, rule_index, issues);
    } else {
        check_inner(f, false, rule_index, issues);
    }
}

fn check_inner(f: &Filter, under_distinct: bool, rule_index: Option<usize>, issues: &mut Vec<PlanIssue>) {
    match f {
        Filter::Subjects | Filter::Predicates | Filter::Objects => {}
        Filter::Distinct(inner) => {
            let (kind, message) = if under_distinct {
                (IssueKind::NestedDistinct, "nested distinct has no counting semantics")
            } else {
                (
                    IssueKind::MisplacedDistinct,
                    "distinct is only allowed at the top of a filter",
                )
            };
            issues.push(PlanIssue {
                kind,
                rule_index,
                message: message.into(),
            });
            check_inner(inner, true, rule_index, issues);
        }
        Filter::And(a, b) | Filter::Or(a, b) => {
            check_inner(a, under_distinct, rule_index, issues);
            check_inner(b, under_distinct, rule_index, issues);
        }
    }
}
