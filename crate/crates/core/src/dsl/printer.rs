use std::fmt::Write;

use crate::qap::{Action, ArithOp, Filter, MetricExpr, Rule, RuleKind, Transformation};

/// Canonical text form. Parsing the output yields an equal expression.
pub fn pretty_print(m: &MetricExpr) -> String {
    let mut out = String::new();
    metric(m, &mut out);
    out
}

pub fn print_transformation(t: &Transformation) -> String {
    let mut out = String::new();
    transformation(t, &mut out);
    out
}

pub fn print_action(a: &Action) -> String {
    let mut out = String::new();
    action(a, &mut out);
    out
}

fn metric_prec(m: &MetricExpr) -> u8 {
    match m {
        MetricExpr::Arith(ArithOp::Add | ArithOp::Sub, ..) => 1,
        MetricExpr::Arith(ArithOp::Mul | ArithOp::Div, ..) => 2,
        _ => 3,
    }
}

fn metric(m: &MetricExpr, out: &mut String) {
    match m {
        MetricExpr::Action(a) => action(a, out),
        MetricExpr::Const(c) => {
            let _ = write!(out, "{c}");
        }
        MetricExpr::Positive(inner) => {
            out.push_str("positive(");
            metric(inner, out);
            out.push(')');
        }
        MetricExpr::Arith(op, l, r) => {
            let p = metric_prec(m);
            wrap(metric_prec(l) < p, out, |o| metric(l, o));
            let _ = write!(out, " {} ", op.symbol());
            wrap(metric_prec(r) <= p, out, |o| metric(r, o));
        }
    }
}

fn action(a: &Action, out: &mut String) {
    match a {
        Action::CountTriples => out.push_str("count(triples)"),
        Action::Count(t) => {
            out.push_str("count(");
            transformation(t, out);
            out.push(')');
        }
    }
}

fn t_prec(t: &Transformation) -> u8 {
    match t {
        Transformation::Union(..) => 1,
        Transformation::Intersect(..) => 2,
        _ => 3,
    }
}

fn transformation(t: &Transformation, out: &mut String) {
    match t {
        Transformation::Rule(r) => rule(r, out),
        Transformation::Select(f) => filter(f, out),
        Transformation::Intersect(a, b) | Transformation::Union(a, b) => {
            let p = t_prec(t);
            wrap(t_prec(a) < p, out, |o| transformation(a, o));
            out.push_str(if p == 1 { " OR " } else { " AND " });
            wrap(t_prec(b) <= p, out, |o| transformation(b, o));
        }
    }
}

fn rule(r: &Rule, out: &mut String) {
    if r.negated {
        out.push('!');
    }
    out.push_str(r.kind.name());
    let Some(f) = &r.filter else { return };
    out.push('(');
    let spine = or_spine(f);
    if r.kind == RuleKind::ResTooLong && (2..=3).contains(&spine.len()) {
        for (i, part) in spine.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            // Commas bind looser than `||`, so a bare Or operand needs no parens.
            filter(part, out);
        }
    } else {
        filter(f, out);
    }
    out.push(')');
}

/// Left-leaning Or chain `((a || b) || c)` as `[a, b, c]`.
fn or_spine(f: &Filter) -> Vec<&Filter> {
    match f {
        Filter::Or(a, b) if !matches!(**b, Filter::Or(..)) => {
            let mut v = or_spine(a);
            v.push(b);
            v
        }
        _ => vec![f],
    }
}

fn f_prec(f: &Filter) -> u8 {
    match f {
        Filter::Or(..) => 1,
        Filter::And(..) => 2,
        _ => 3,
    }
}

fn filter(f: &Filter, out: &mut String) {
    match f {
        Filter::Subjects => out.push_str("?s"),
        Filter::Predicates => out.push_str("?p"),
        Filter::Objects => out.push_str("?o"),
        Filter::Distinct(inner) => {
            out.push_str("distinct(");
            filter(inner, out);
            out.push(')');
        }
        Filter::And(a, b) | Filter::Or(a, b) => {
            let p = f_prec(f);
            wrap(f_prec(a) < p, out, |o| filter(a, o));
            out.push_str(if p == 1 { " || " } else { " && " });
            wrap(f_prec(b) <= p, out, |o| filter(b, o));
        }
    }
}

fn wrap(parens: bool, out: &mut String, body: impl FnOnce(&mut String)) {
    if parens {
        out.push('(');
    }
    body(out);
    if parens {
        out.push(')');
    }
}
