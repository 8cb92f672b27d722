//! Text syntax for metrics.
//!
//! ```text
//! metric   := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := NUMBER | '-' NUMBER | 'count' '(' ('triples' | trans) ')'
//!           | 'positive' '(' metric ')' | '(' metric ')'
//! trans    := inter (('OR' | '∪') inter)*
//! inter    := tatom (('AND' | '∩') tatom)*
//! tatom    := '!'? RULE ('(' filter (',' filter)* ')')? | filter | '(' trans ')'
//! filter   := fand (('||' | 'or') fand)*
//! fand     := fatom ('&&' fatom)*
//! fatom    := '?s' | '?p' | '?o' | 'distinct' '(' filter ')' | '(' filter ')'
//! ```
//!
//! Several rule arguments are equivalent to joining them with `||`.
//! Metric files hold stanzas `metric NAME "description" := metric`.

mod lexer;
mod parser;
mod printer;

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::qap::{check_plan, EvaluationContext, IssueKind, MetricExpr};
pub use printer::{pretty_print, print_action, print_transformation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    /// Byte offsets into the source.
    pub start: usize,
    pub end: usize,
    /// 1-based.
    pub line: u32,
    pub column: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DslDiagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl DslDiagnostic {
    pub fn error(message: impl Into<String>, span: SourceSpan) -> DslDiagnostic {
        DslDiagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
        }
    }

    pub fn warning(message: impl Into<String>, span: SourceSpan) -> DslDiagnostic {
        DslDiagnostic {
            severity: Severity::Warning,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// The diagnostic followed by the offending source line and a caret marker.
    pub fn render(&self, src: &str) -> String {
        let line = src.lines().nth(self.span.line.saturating_sub(1) as usize).unwrap_or("");
        let col = self.span.column.saturating_sub(1) as usize;
        let line_start = src[..self.span.start.min(src.len())].rfind('\n').map_or(0, |i| i + 1);
        let width = src
            .get(self.span.start..self.span.end.min(line_start + line.len()).max(self.span.start))
            .map_or(1, |s| s.chars().count().max(1));
        format!("{self}\n  | {line}\n  | {}{}", " ".repeat(col), "^".repeat(width))
    }
}

impl fmt::Display for DslDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}: {}", self.span.line, self.span.column, self.message)
    }
}

impl std::error::Error for DslDiagnostic {}

/// A parsed expression with the location of each rule, in source order.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedMetric {
    pub expr: MetricExpr,
    pub span: SourceSpan,
    pub rule_spans: Vec<SourceSpan>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedMetric {
    pub name: String,
    pub description: String,
    pub name_span: SourceSpan,
    pub parsed: ParsedMetric,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricFile {
    pub metrics: Vec<NamedMetric>,
    pub warnings: Vec<DslDiagnostic>,
}

pub fn parse_metric_text(src: &str) -> Result<ParsedMetric, DslDiagnostic> {
    parser::Parser::new(src)?.parse_single()
}

/// Parses a file of named metrics. Duplicate names are an error; names that
/// collide with a built-in metric are a warning.
pub fn parse_metric_file(src: &str) -> Result<MetricFile, DslDiagnostic> {
    let metrics = parser::Parser::new(src)?.parse_file()?;
    let mut seen = HashSet::new();
    let mut warnings = Vec::new();
    for m in &metrics {
        if !seen.insert(m.name.as_str()) {
            return Err(DslDiagnostic::error(
                format!("duplicate metric name '{}'", m.name),
                m.name_span,
            ));
        }
        if crate::metrics::builtin(&m.name).is_some() {
            warnings.push(DslDiagnostic::warning(
                format!("metric '{}' shadows the built-in metric of the same name", m.name),
                m.name_span,
            ));
        }
    }
    Ok(MetricFile { metrics, warnings })
}

/// Checks a parsed metric against a context; each issue points at its rule.
pub fn validate_plan(parsed: &ParsedMetric, ctx: &EvaluationContext) -> Vec<DslDiagnostic> {
    let Err(issues) = check_plan(&parsed.expr, ctx) else {
        return Vec::new();
    };
    issues
        .into_iter()
        .map(|issue| {
            let span = issue
                .rule_index
                .and_then(|i| parsed.rule_spans.get(i).copied())
                .unwrap_or(parsed.span);
            let message = match issue.kind {
                IssueKind::MissingParameter => format!("configuration: {}", issue.message),
                _ => issue.message,
            };
            DslDiagnostic::error(message, span)
        })
        .collect()
}
