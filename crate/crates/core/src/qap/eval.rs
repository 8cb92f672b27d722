//! Evaluation of rules, transformations, actions and metrics.
//!
//! The scanning primitives here (`CountPlan`, `Partial`, `scan`) are shared
//! with the partition-parallel engine: a partition is scanned into
//! `Partial`s, partials merge associatively, and `finish` turns the merged
//! partial into a count.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use super::ast::{Action, ArithOp, Filter, MetricExpr, Rule, RuleKind, Transformation};
use super::context::EvaluationContext;
use super::plan::{check_plan, PlanIssue};
use crate::rdf::{Dataset, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("configuration error: {}", join(.0))]
    Configuration(Vec<PlanIssue>),
    #[error("plan error: {}", join(.0))]
    Plan(Vec<PlanIssue>),
}

fn join(issues: &[PlanIssue]) -> String {
    issues.iter().map(|i| i.message.as_str()).collect::<Vec<_>>().join("; ")
}

impl EvalError {
    pub fn from_issues(issues: Vec<PlanIssue>) -> EvalError {
        if issues.iter().any(|i| i.kind.is_configuration()) {
            EvalError::Configuration(issues)
        } else {
            EvalError::Plan(issues)
        }
    }

    pub fn issues(&self) -> &[PlanIssue] {
        match self {
            EvalError::Configuration(i) | EvalError::Plan(i) => i,
        }
    }
}

/// Instrumentation collected while scanning.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ScanStats {
    pub rule_evaluations: u64,
    /// Typed literals checked for lexical validity whose datatype has no validator.
    pub unknown_datatype_literals: u64,
}

impl ScanStats {
    pub fn merge(&mut self, other: ScanStats) {
        self.rule_evaluations += other.rule_evaluations;
        self.unknown_datatype_literals += other.unknown_datatype_literals;
    }
}

fn filter_holds(f: &Filter, triple: &Triple, test: &mut impl FnMut(&Term) -> bool) -> bool {
    match f {
        Filter::Subjects => test(triple.subject()),
        Filter::Predicates => test(triple.predicate()),
        Filter::Objects => test(triple.object()),
        Filter::Distinct(inner) => filter_holds(inner, triple, test),
        Filter::And(a, b) => filter_holds(a, triple, test) & filter_holds(b, triple, test),
        Filter::Or(a, b) => filter_holds(a, triple, test) | filter_holds(b, triple, test),
    }
}

fn iri_in(term: &Term, pred: impl Fn(&str) -> bool) -> bool {
    term.as_iri().is_some_and(pred)
}

/// Rule semantics without legality checks. Counts one rule evaluation.
pub(crate) fn rule_holds(rule: &Rule, triple: &Triple, ctx: &EvaluationContext, stats: &mut ScanStats) -> bool {
    stats.rule_evaluations += 1;
    let Some(filter) = &rule.filter else {
        return false;
    };
    let mut test = |term: &Term| -> bool {
        match rule.kind {
            RuleKind::IsUri | RuleKind::IsIri => term.is_iri(),
            RuleKind::IsInternal => iri_in(term, |i| ctx.is_internal(i)),
            RuleKind::IsExternal => iri_in(term, |i| !ctx.is_internal(i)),
            RuleKind::IsLiteral => term.is_literal(),
            RuleKind::IsLabeled => iri_in(term, |i| ctx.is_label_predicate(i)),
            RuleKind::HasLicenceAssociated => iri_in(term, |i| ctx.is_license_predicate(i)),
            RuleKind::HasLicenceIndications => iri_in(term, |i| ctx.is_license_indication_predicate(i)),
            RuleKind::IsLicenseStatement => term.as_literal().is_some_and(|l| ctx.is_license_phrase(l.lexical())),
            RuleKind::HasType => !term.is_literal() && ctx.is_type_predicate(triple.predicate_iri()),
            RuleKind::ResTooLong => iri_in(term, |i| i.chars().count() > ctx.uri_length_threshold()),
            RuleKind::GetDatatype => term.as_literal().is_some_and(|l| l.is_typed()),
            RuleKind::IsLexicalFormCompatibleWithDatatype => match term.as_literal() {
                None => false,
                Some(lit) => match ctx.datatypes().check(lit.datatype(), lit.lexical()) {
                    Some(ok) => ok,
                    None => {
                        stats.unknown_datatype_literals += 1;
                        true
                    }
                },
            },
            RuleKind::IsBroken | RuleKind::HasPredicateP => false,
        }
    };
    filter_holds(filter, triple, &mut test) != rule.negated
}

/// True when the triple belongs to the transformation's (bag) output. Every
/// rule node is evaluated exactly once; there is no short-circuiting.
pub(crate) fn matches(t: &Transformation, triple: &Triple, ctx: &EvaluationContext, stats: &mut ScanStats) -> bool {
    match t {
        Transformation::Rule(rule) => rule_holds(rule, triple, ctx, stats),
        Transformation::Select(_) => true,
        Transformation::Intersect(a, b) => matches(a, triple, ctx, stats) & matches(b, triple, ctx, stats),
        Transformation::Union(a, b) => matches(a, triple, ctx, stats) | matches(b, triple, ctx, stats),
    }
}

/// A projected term tuple; unprojected positions are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TermTuple<'a>(pub [Option<&'a Term>; 3]);

impl<'a> TermTuple<'a> {
    fn project(triple: &'a Triple, mask: u8) -> TermTuple<'a> {
        let pick = |bit: u8, t: &'a Term| (mask & bit != 0).then_some(t);
        TermTuple([
            pick(1, triple.subject()),
            pick(2, triple.predicate()),
            pick(4, triple.object()),
        ])
    }
}

#[derive(Debug)]
pub(crate) enum SetTree {
    Leaf(usize),
    Intersect(Box<SetTree>, Box<SetTree>),
    Union(Box<SetTree>, Box<SetTree>),
}

/// How one action is counted.
#[derive(Debug)]
pub(crate) enum CountPlan<'m> {
    All,
    Bag(&'m Transformation),
    /// Projected sets: each leaf is a bag sub-transformation whose matching
    /// triples are projected on `mask`; the tree combines leaf sets.
    Distinct {
        mask: u8,
        leaves: Vec<&'m Transformation>,
        tree: SetTree,
    },
}

impl<'m> CountPlan<'m> {
    pub(crate) fn new(action: &'m Action) -> CountPlan<'m> {
        match action {
            Action::CountTriples => CountPlan::All,
            Action::Count(t) => match t.distinct_filter() {
                None => CountPlan::Bag(t),
                Some(f) => {
                    let mut leaves = Vec::new();
                    let tree = build_set_tree(t, &mut leaves);
                    CountPlan::Distinct {
                        mask: f.positions(),
                        leaves,
                        tree,
                    }
                }
            },
        }
    }

    pub(crate) fn empty_partial<'a>(&self) -> Partial<'a> {
        match self {
            CountPlan::All | CountPlan::Bag(_) => Partial::Count(0),
            CountPlan::Distinct { leaves, .. } => Partial::Sets(vec![HashSet::new(); leaves.len()]),
        }
    }

    pub(crate) fn finish(&self, partial: Partial<'_>) -> u64 {
        match (self, partial) {
            (CountPlan::Distinct { tree, .. }, Partial::Sets(sets)) => {
                let mut sets: Vec<_> = sets.into_iter().map(Some).collect();
                eval_set_tree(tree, &mut sets).len() as u64
            }
            (_, Partial::Count(n)) => n,
            _ => unreachable!("partial shape follows its plan"),
        }
    }

    fn tuples_of<'a>(&self, partial: Partial<'a>) -> HashSet<TermTuple<'a>> {
        match (self, partial) {
            (CountPlan::Distinct { tree, .. }, Partial::Sets(sets)) => {
                let mut sets: Vec<_> = sets.into_iter().map(Some).collect();
                eval_set_tree(tree, &mut sets)
            }
            _ => unreachable!("only distinct plans produce tuple sets"),
        }
    }
}

fn build_set_tree<'m>(t: &'m Transformation, leaves: &mut Vec<&'m Transformation>) -> SetTree {
    let projecting = t.distinct_filter().is_some();
    match t {
        Transformation::Intersect(a, b) if projecting => {
            SetTree::Intersect(Box::new(build_set_tree(a, leaves)), Box::new(build_set_tree(b, leaves)))
        }
        Transformation::Union(a, b) if projecting => {
            SetTree::Union(Box::new(build_set_tree(a, leaves)), Box::new(build_set_tree(b, leaves)))
        }
        _ => {
            leaves.push(t);
            SetTree::Leaf(leaves.len() - 1)
        }
    }
}

fn eval_set_tree<'a>(tree: &SetTree, sets: &mut [Option<HashSet<TermTuple<'a>>>]) -> HashSet<TermTuple<'a>> {
    match tree {
        SetTree::Leaf(i) => sets[*i].take().expect("each leaf is used once"),
        SetTree::Intersect(a, b) => {
            let a = eval_set_tree(a, sets);
            let b = eval_set_tree(b, sets);
            let (small, large) = if a.len() <= b.len() { (a, &b) } else { (b, &a) };
            small.into_iter().filter(|x| large.contains(x)).collect()
        }
        SetTree::Union(a, b) => {
            let a = eval_set_tree(a, sets);
            let b = eval_set_tree(b, sets);
            let (mut large, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            large.extend(small);
            large
        }
    }
}

/// Per-partition accumulator of one action.
#[derive(Debug)]
pub(crate) enum Partial<'a> {
    Count(u64),
    Sets(Vec<HashSet<TermTuple<'a>>>),
}

impl<'a> Partial<'a> {
    /// Addition for counts, set union for projected sets.
    pub(crate) fn merge(self, other: Partial<'a>) -> Partial<'a> {
        match (self, other) {
            (Partial::Count(a), Partial::Count(b)) => Partial::Count(a + b),
            (Partial::Sets(a), Partial::Sets(b)) => Partial::Sets(
                a.into_iter()
                    .zip(b)
                    .map(|(x, y)| {
                        let (mut large, small) = if x.len() >= y.len() { (x, y) } else { (y, x) };
                        large.extend(small);
                        large
                    })
                    .collect(),
            ),
            _ => unreachable!("partials of one plan share a shape"),
        }
    }
}

/// One pass over `triples`, updating every plan's accumulator.
pub(crate) fn scan<'a>(
    plans: &[CountPlan<'_>],
    triples: &'a [Triple],
    ctx: &EvaluationContext,
) -> (Vec<Partial<'a>>, ScanStats) {
    scan_grouped(std::slice::from_ref(&plans), triples, ctx)
        .pop()
        .expect("one group")
}

/// One pass over `triples` for several metrics at once; stats stay per group.
pub(crate) fn scan_grouped<'a, 'm, P: AsRef<[CountPlan<'m>]>>(
    groups: &[P],
    triples: &'a [Triple],
    ctx: &EvaluationContext,
) -> Vec<(Vec<Partial<'a>>, ScanStats)> {
    let mut out: Vec<(Vec<Partial<'a>>, ScanStats)> = groups
        .iter()
        .map(|g| {
            (
                g.as_ref().iter().map(|p| p.empty_partial()).collect(),
                ScanStats::default(),
            )
        })
        .collect();
    for triple in triples {
        for (group, (partials, stats)) in groups.iter().zip(out.iter_mut()) {
            for (plan, partial) in group.as_ref().iter().zip(partials.iter_mut()) {
                accumulate(plan, partial, triple, ctx, stats);
            }
        }
    }
    out
}

fn accumulate<'a>(
    plan: &CountPlan<'_>,
    partial: &mut Partial<'a>,
    triple: &'a Triple,
    ctx: &EvaluationContext,
    stats: &mut ScanStats,
) {
    match (plan, partial) {
        (CountPlan::All, Partial::Count(n)) => *n += 1,
        (CountPlan::Bag(t), Partial::Count(n)) => *n += matches(t, triple, ctx, stats) as u64,
        (CountPlan::Distinct { mask, leaves, .. }, Partial::Sets(sets)) => {
            for (leaf, set) in leaves.iter().zip(sets.iter_mut()) {
                if matches(leaf, triple, ctx, stats) {
                    set.insert(TermTuple::project(triple, *mask));
                }
            }
        }
        _ => unreachable!("partial shape follows its plan"),
    }
}

/// Folds action counts (in source order) through the metric's arithmetic.
/// Returns the value and whether any division had a zero denominator.
pub(crate) fn combine(m: &MetricExpr, counts: &[u64]) -> (f64, bool) {
    fn go(m: &MetricExpr, counts: &mut std::slice::Iter<'_, u64>, zero: &mut bool) -> f64 {
        match m {
            MetricExpr::Action(_) => *counts.next().expect("one count per action") as f64,
            MetricExpr::Const(c) => *c,
            MetricExpr::Arith(op, l, r) => {
                let l = go(l, counts, zero);
                let r = go(r, counts, zero);
                match op {
                    ArithOp::Add => l + r,
                    ArithOp::Sub => l - r,
                    ArithOp::Mul => l * r,
                    ArithOp::Div if r == 0.0 => {
                        *zero = true;
                        0.0
                    }
                    ArithOp::Div => l / r,
                }
            }
            MetricExpr::Positive(inner) => {
                if go(inner, counts, zero) > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
    let mut zero = false;
    let mut it = counts.iter();
    let v = go(m, &mut it, &mut zero);
    (v, zero)
}

/// Output of a transformation.
#[derive(Debug)]
pub enum Selection<'a> {
    /// Sub-bag in input order.
    Triples(Vec<&'a Triple>),
    /// Distinct projected tuples.
    Tuples(HashSet<TermTuple<'a>>),
}

impl Selection<'_> {
    pub fn len(&self) -> usize {
        match self {
            Selection::Triples(t) => t.len(),
            Selection::Tuples(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricValue {
    pub value: f64,
    /// One per action, in source order.
    pub counts: Vec<u64>,
    pub zero_denominator: bool,
    pub stats: ScanStats,
}

fn legal(m: &MetricExpr, ctx: &EvaluationContext) -> Result<(), EvalError> {
    check_plan(m, ctx).map_err(EvalError::from_issues)
}

pub fn eval_rule(rule: &Rule, triple: &Triple, ctx: &EvaluationContext) -> Result<bool, EvalError> {
    legal(&MetricExpr::count(Transformation::Rule(rule.clone())), ctx)?;
    Ok(rule_holds(rule, triple, ctx, &mut ScanStats::default()))
}

pub fn eval_transformation<'a>(
    t: &Transformation,
    d: &'a Dataset,
    ctx: &EvaluationContext,
) -> Result<Selection<'a>, EvalError> {
    let action = Action::Count(t.clone());
    legal(&MetricExpr::Action(action.clone()), ctx)?;
    let plan = CountPlan::new(&action);
    let mut stats = ScanStats::default();
    Ok(match plan {
        CountPlan::Bag(t) => {
            Selection::Triples(d.triples.iter().filter(|tr| matches(t, tr, ctx, &mut stats)).collect())
        }
        CountPlan::Distinct { .. } => {
            let (mut partials, _) = scan(std::slice::from_ref(&plan), &d.triples, ctx);
            Selection::Tuples(plan.tuples_of(partials.pop().expect("one plan")))
        }
        CountPlan::All => unreachable!("count(t) never plans as count(triples)"),
    })
}

pub fn eval_action(a: &Action, d: &Dataset, ctx: &EvaluationContext) -> Result<u64, EvalError> {
    legal(&MetricExpr::Action(a.clone()), ctx)?;
    let plan = CountPlan::new(a);
    let (mut partials, _) = scan(std::slice::from_ref(&plan), &d.triples, ctx);
    Ok(plan.finish(partials.pop().expect("one plan")))
}

/// Single-threaded evaluation of a whole metric.
pub fn eval_metric(m: &MetricExpr, d: &Dataset, ctx: &EvaluationContext) -> Result<MetricValue, EvalError> {
    legal(m, ctx)?;
    let actions = m.actions();
    let plans: Vec<_> = actions.iter().map(|a| CountPlan::new(a)).collect();
    let (partials, stats) = scan(&plans, &d.triples, ctx);
    let counts: Vec<u64> = plans.iter().zip(partials).map(|(p, part)| p.finish(part)).collect();
    let (value, zero_denominator) = combine(m, &counts);
    Ok(MetricValue {
        value,
        counts,
        zero_denominator,
        stats,
    })
}
