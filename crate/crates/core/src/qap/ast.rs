//! Filters, rules, transformations, actions and metrics.

use std::fmt;

use crate::rdf::Position;

/// Selects the triple position(s) a rule inspects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Filter {
    Subjects,
    Predicates,
    Objects,
    /// Project the inner positions and deduplicate. Only legal as the root
    /// of a rule's or selection's filter.
    Distinct(Box<Filter>),
    /// The rule must hold at both sides.
    And(Box<Filter>, Box<Filter>),
    /// The rule must hold at either side.
    Or(Box<Filter>, Box<Filter>),
}

impl Filter {
    pub fn at(pos: Position) -> Filter {
        match pos {
            Position::Subject => Filter::Subjects,
            Position::Predicate => Filter::Predicates,
            Position::Object => Filter::Objects,
        }
    }

    pub fn distinct(self) -> Filter {
        Filter::Distinct(Box::new(self))
    }

    pub fn and(self, other: Filter) -> Filter {
        Filter::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Filter) -> Filter {
        Filter::Or(Box::new(self), Box::new(other))
    }

    /// Bit set of mentioned positions (bit 0 = subject).
    pub fn positions(&self) -> u8 {
        match self {
            Filter::Subjects => 1,
            Filter::Predicates => 2,
            Filter::Objects => 4,
            Filter::Distinct(inner) => inner.positions(),
            Filter::And(a, b) | Filter::Or(a, b) => a.positions() | b.positions(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    IsUri,
    IsIri,
    IsInternal,
    IsExternal,
    IsLiteral,
    IsLabeled,
    HasLicenceAssociated,
    HasLicenceIndications,
    IsLicenseStatement,
    HasType,
    ResTooLong,
    GetDatatype,
    IsLexicalFormCompatibleWithDatatype,
    /// Needs network access; never executable.
    IsBroken,
    /// Listed in the grammar without an argument convention; never executable.
    HasPredicateP,
}

impl RuleKind {
    pub const ALL: [RuleKind; 15] = [
        RuleKind::IsUri,
        RuleKind::IsIri,
        RuleKind::IsInternal,
        RuleKind::IsExternal,
        RuleKind::IsLiteral,
        RuleKind::IsLabeled,
        RuleKind::HasLicenceAssociated,
        RuleKind::HasLicenceIndications,
        RuleKind::IsLicenseStatement,
        RuleKind::HasType,
        RuleKind::ResTooLong,
        RuleKind::GetDatatype,
        RuleKind::IsLexicalFormCompatibleWithDatatype,
        RuleKind::IsBroken,
        RuleKind::HasPredicateP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::IsUri => "isURI",
            RuleKind::IsIri => "isIRI",
            RuleKind::IsInternal => "isInternal",
            RuleKind::IsExternal => "isExternal",
            RuleKind::IsLiteral => "isLiteral",
            RuleKind::IsLabeled => "isLabeled",
            RuleKind::HasLicenceAssociated => "hasLicenceAssociated",
            RuleKind::HasLicenceIndications => "hasLicenceIndications",
            RuleKind::IsLicenseStatement => "isLicenseStatement",
            RuleKind::HasType => "hasType",
            RuleKind::ResTooLong => "resTooLong",
            RuleKind::GetDatatype => "getDatatype",
            RuleKind::IsLexicalFormCompatibleWithDatatype => "isLexicalFormCompatibleWithDatatype",
            RuleKind::IsBroken => "isBroken",
            RuleKind::HasPredicateP => "hasPredicateP",
        }
    }

    /// Canonical names plus the spellings used in metric tables.
    pub fn from_name(name: &str) -> Option<RuleKind> {
        let kind = match name {
            "internal" => RuleKind::IsInternal,
            "external" => RuleKind::IsExternal,
            "lexicalFormCompatibleWithDatatype" => RuleKind::IsLexicalFormCompatibleWithDatatype,
            "hasLicenseAssociated" => RuleKind::HasLicenceAssociated,
            "hasLicenseIndications" => RuleKind::HasLicenceIndications,
            _ => return RuleKind::ALL.into_iter().find(|k| k.name() == name),
        };
        Some(kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub kind: RuleKind,
    /// `None` only for the argument-less `hasPredicateP`.
    pub filter: Option<Filter>,
    pub negated: bool,
}

impl Rule {
    pub fn new(kind: RuleKind, filter: Filter) -> Rule {
        Rule {
            kind,
            filter: Some(filter),
            negated: false,
        }
    }

    pub fn negate(mut self) -> Rule {
        self.negated = !self.negated;
        self
    }
}

/// Maps a bag of triples to a sub-bag (or, under `distinct`, to a set of
/// projected term tuples).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Transformation {
    Rule(Rule),
    /// Every triple, viewed through a filter. Useful with `distinct`.
    Select(Filter),
    Intersect(Box<Transformation>, Box<Transformation>),
    Union(Box<Transformation>, Box<Transformation>),
}

impl Transformation {
    pub fn rule(kind: RuleKind, filter: Filter) -> Transformation {
        Transformation::Rule(Rule::new(kind, filter))
    }

    pub fn and(self, other: Transformation) -> Transformation {
        Transformation::Intersect(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Transformation) -> Transformation {
        Transformation::Union(Box::new(self), Box::new(other))
    }

    /// Number of rule nodes.
    pub fn rule_count(&self) -> usize {
        match self {
            Transformation::Rule(_) => 1,
            Transformation::Select(_) => 0,
            Transformation::Intersect(a, b) | Transformation::Union(a, b) => a.rule_count() + b.rule_count(),
        }
    }

    /// Rules in source (pre-)order.
    pub fn rules(&self) -> Vec<&Rule> {
        let mut out = Vec::new();
        self.visit_rules(&mut |r| out.push(r));
        out
    }

    pub(crate) fn visit_rules<'a>(&'a self, f: &mut impl FnMut(&'a Rule)) {
        match self {
            Transformation::Rule(r) => f(r),
            Transformation::Select(_) => {}
            Transformation::Intersect(a, b) | Transformation::Union(a, b) => {
                a.visit_rules(f);
                b.visit_rules(f);
            }
        }
    }

    /// The filter of the root `distinct`, if the transformation projects.
    pub fn distinct_filter(&self) -> Option<&Filter> {
        match self {
            Transformation::Rule(Rule {
                filter: Some(f @ Filter::Distinct(_)),
                ..
            })
            | Transformation::Select(f @ Filter::Distinct(_)) => Some(f),
            Transformation::Rule(_) | Transformation::Select(_) => None,
            Transformation::Intersect(a, b) | Transformation::Union(a, b) => {
                a.distinct_filter().or_else(|| b.distinct_filter())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    /// `count(triples)`: size of the whole bag.
    CountTriples,
    Count(Transformation),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> char {
        match self {
            ArithOp::Add => '+',
            ArithOp::Sub => '-',
            ArithOp::Mul => '*',
            ArithOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricExpr {
    Action(Action),
    Const(f64),
    Arith(ArithOp, Box<MetricExpr>, Box<MetricExpr>),
    /// 1 when the inner value is positive, else 0.
    Positive(Box<MetricExpr>),
}

impl MetricExpr {
    pub fn count(t: Transformation) -> MetricExpr {
        MetricExpr::Action(Action::Count(t))
    }

    pub fn count_triples() -> MetricExpr {
        MetricExpr::Action(Action::CountTriples)
    }

    pub fn positive(self) -> MetricExpr {
        MetricExpr::Positive(Box::new(self))
    }

    pub fn arith(op: ArithOp, left: MetricExpr, right: MetricExpr) -> MetricExpr {
        MetricExpr::Arith(op, Box::new(left), Box::new(right))
    }

    /// Actions in source order.
    pub fn actions(&self) -> Vec<&Action> {
        let mut out = Vec::new();
        self.visit_actions(&mut |a| out.push(a));
        out
    }

    fn visit_actions<'a>(&'a self, f: &mut impl FnMut(&'a Action)) {
        match self {
            MetricExpr::Action(a) => f(a),
            MetricExpr::Const(_) => {}
            MetricExpr::Arith(_, l, r) => {
                l.visit_actions(f);
                r.visit_actions(f);
            }
            MetricExpr::Positive(inner) => inner.visit_actions(f),
        }
    }

    /// Rules in source order, across all actions.
    pub fn rules(&self) -> Vec<&Rule> {
        let mut out = Vec::new();
        for action in self.actions() {
            if let Action::Count(t) = action {
                t.visit_rules(&mut |r| out.push(r));
            }
        }
        out
    }

    pub fn rule_count(&self) -> usize {
        self.rules().len()
    }
}

impl std::ops::Add for MetricExpr {
    type Output = MetricExpr;
    fn add(self, rhs: MetricExpr) -> MetricExpr {
        MetricExpr::arith(ArithOp::Add, self, rhs)
    }
}

impl std::ops::Sub for MetricExpr {
    type Output = MetricExpr;
    fn sub(self, rhs: MetricExpr) -> MetricExpr {
        MetricExpr::arith(ArithOp::Sub, self, rhs)
    }
}

impl std::ops::Mul for MetricExpr {
    type Output = MetricExpr;
    fn mul(self, rhs: MetricExpr) -> MetricExpr {
        MetricExpr::arith(ArithOp::Mul, self, rhs)
    }
}

impl std::ops::Div for MetricExpr {
    type Output = MetricExpr;
    fn div(self, rhs: MetricExpr) -> MetricExpr {
        MetricExpr::arith(ArithOp::Div, self, rhs)
    }
}

impl fmt::Display for MetricExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::pretty_print(self))
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::print_transformation(self))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::print_action(self))
    }
}
