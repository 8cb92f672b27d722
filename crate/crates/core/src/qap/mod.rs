//! The quality assessment pattern: filters select triple positions, rules
//! test them, transformations combine rules into sub-bags, actions count,
//! and metrics do arithmetic over counts.

mod ast;
mod context;
pub(crate) mod eval;
mod plan;

pub use ast::{Action, ArithOp, Filter, MetricExpr, Rule, RuleKind, Transformation};
pub use context::{ContextError, ContextOverrides, EvaluationContext};
pub use eval::{
    eval_action, eval_metric, eval_rule, eval_transformation, EvalError, MetricValue, ScanStats, Selection, TermTuple,
};
pub use plan::{check_plan, check_structure, IssueKind, PlanIssue};
