use super::lexer::{tokenize, Tok, Token};
use super::{DslDiagnostic, NamedMetric, ParsedMetric, SourceSpan};
use crate::qap::{Action, ArithOp, Filter, MetricExpr, Rule, RuleKind, Transformation};

type PResult<T> = Result<T, DslDiagnostic>;

pub(crate) struct Parser<'s> {
    src: &'s str,
    toks: Vec<Token>,
    pos: usize,
    rule_spans: Vec<SourceSpan>,
}

impl<'s> Parser<'s> {
    pub(crate) fn new(src: &'s str) -> PResult<Parser<'s>> {
        Ok(Parser {
            src,
            toks: tokenize(src)?,
            pos: 0,
            rule_spans: Vec::new(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Span of the next token, or an empty span at end of input.
    fn here(&self) -> SourceSpan {
        match self.toks.get(self.pos) {
            Some(t) => t.span,
            None => self.end_span(),
        }
    }

    fn end_span(&self) -> SourceSpan {
        let line = self.src.matches('\n').count() as u32 + 1;
        let column = self.src.rsplit('\n').next().map_or(0, |l| l.chars().count()) as u32 + 1;
        SourceSpan {
            start: self.src.len(),
            end: self.src.len(),
            line,
            column,
        }
    }

    fn prev_end(&self) -> usize {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.toks.get(i))
            .map_or(0, |t| t.span.end)
    }

    fn unexpected(&self, expected: &str) -> DslDiagnostic {
        match self.peek() {
            Some(Tok::RParen) => DslDiagnostic::error(
                format!("unbalanced parentheses: unexpected ')' where {expected} was expected"),
                self.here(),
            ),
            Some(t) => DslDiagnostic::error(format!("expected {expected}, found {}", t.describe()), self.here()),
            None => DslDiagnostic::error(format!("expected {expected}, found end of input"), self.here()),
        }
    }

    fn close(&mut self, open: SourceSpan) -> PResult<()> {
        if self.eat(&Tok::RParen) {
            return Ok(());
        }
        let mut d = match self.peek() {
            None => DslDiagnostic::error("unbalanced parentheses: '(' is never closed", open),
            Some(t) => DslDiagnostic::error(
                format!("expected ')' to close '(', found {}", t.describe()),
                self.here(),
            ),
        };
        if self.peek().is_none() {
            d.span = open;
        }
        Err(d)
    }

    fn open(&mut self, what: &str) -> PResult<SourceSpan> {
        let span = self.here();
        if self.eat(&Tok::LParen) {
            Ok(span)
        } else {
            Err(self.unexpected(&format!("'(' after {what}")))
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// A whole source consisting of a single metric expression.
    pub(crate) fn parse_single(mut self) -> PResult<ParsedMetric> {
        let start = self.here();
        let expr = self.metric()?;
        if !self.at_end() {
            return Err(self.unexpected("an operator or end of input"));
        }
        Ok(ParsedMetric {
            expr,
            span: SourceSpan {
                end: self.prev_end(),
                ..start
            },
            rule_spans: self.rule_spans,
        })
    }

    /// `metric <name> "<description>" := <expr>` stanzas.
    pub(crate) fn parse_file(mut self) -> PResult<Vec<NamedMetric>> {
        let mut out = Vec::new();
        while !self.at_end() {
            match self.peek() {
                Some(Tok::Ident(k)) if k == "metric" => {
                    self.pos += 1;
                }
                _ => return Err(self.unexpected("'metric'")),
            }
            let name_span = self.here();
            let name = match self.bump().map(|t| t.tok.clone()) {
                Some(Tok::Ident(n)) => n,
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("a metric name"));
                }
            };
            let description = match self.peek() {
                Some(Tok::Str(s)) => {
                    let s = s.clone();
                    self.pos += 1;
                    s
                }
                _ => return Err(self.unexpected("a quoted description")),
            };
            if !self.eat(&Tok::Define) {
                return Err(self.unexpected("':='"));
            }
            self.rule_spans.clear();
            let start = self.here();
            let expr = self.metric()?;
            if !self.at_end() && !matches!(self.peek(), Some(Tok::Ident(k)) if k == "metric") {
                return Err(self.unexpected("an operator, the next 'metric' stanza or end of input"));
            }
            out.push(NamedMetric {
                name,
                description,
                name_span,
                parsed: ParsedMetric {
                    expr,
                    span: SourceSpan {
                        end: self.prev_end(),
                        ..start
                    },
                    rule_spans: std::mem::take(&mut self.rule_spans),
                },
            });
        }
        Ok(out)
    }

    fn metric(&mut self) -> PResult<MetricExpr> {
        let mut left = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => ArithOp::Add,
                Some(Tok::Minus) => ArithOp::Sub,
                _ => return Ok(left),
            };
            self.pos += 1;
            let right = self.term()?;
            left = MetricExpr::arith(op, left, right);
        }
    }

    fn term(&mut self) -> PResult<MetricExpr> {
        let mut left = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => ArithOp::Mul,
                Some(Tok::Slash) => ArithOp::Div,
                _ => return Ok(left),
            };
            self.pos += 1;
            let right = self.factor()?;
            left = MetricExpr::arith(op, left, right);
        }
    }

    fn factor(&mut self) -> PResult<MetricExpr> {
        match self.peek().cloned() {
            Some(Tok::Number(n)) => {
                self.pos += 1;
                Ok(MetricExpr::Const(n))
            }
            Some(Tok::Minus) if matches!(self.peek_at(1), Some(Tok::Number(_))) => {
                self.pos += 1;
                let Some(Tok::Number(n)) = self.bump().map(|t| t.tok.clone()) else {
                    unreachable!()
                };
                Ok(MetricExpr::Const(-n))
            }
            Some(Tok::LParen) => {
                let open = self.here();
                self.pos += 1;
                let inner = self.metric()?;
                self.close(open)?;
                Ok(inner)
            }
            Some(Tok::Ident(word)) if word == "count" || word == "Count" => {
                self.pos += 1;
                let open = self.open("count")?;
                let action = if matches!(self.peek(), Some(Tok::Ident(w)) if w == "triples")
                    && self.peek_at(1) == Some(&Tok::RParen)
                {
                    self.pos += 1;
                    Action::CountTriples
                } else {
                    Action::Count(self.transformation()?)
                };
                self.close(open)?;
                Ok(MetricExpr::Action(action))
            }
            Some(Tok::Ident(word)) if word == "positive" => {
                self.pos += 1;
                let open = self.open("positive")?;
                let inner = self.metric()?;
                self.close(open)?;
                Ok(inner.positive())
            }
            Some(Tok::Ident(word)) if RuleKind::from_name(&word).is_some() => Err(DslDiagnostic::error(
                format!("rule '{word}' must be wrapped in count(...)"),
                self.here(),
            )),
            _ => Err(self.unexpected("count(...), positive(...), a number or '('")),
        }
    }

    fn transformation(&mut self) -> PResult<Transformation> {
        let mut left = self.t_and()?;
        while self.eat(&Tok::Union) {
            let right = self.t_and()?;
            left = left.or(right);
        }
        Ok(left)
    }

    fn t_and(&mut self) -> PResult<Transformation> {
        let mut left = self.t_atom()?;
        while self.eat(&Tok::Inter) {
            let right = self.t_atom()?;
            left = left.and(right);
        }
        Ok(left)
    }

    fn at_filter_operator(&self) -> bool {
        matches!(self.peek(), Some(Tok::AndAnd | Tok::OrOr)) || matches!(self.peek(), Some(Tok::Ident(w)) if w == "or")
    }

    fn starts_filter(&self) -> bool {
        match self.peek() {
            Some(Tok::Var(_)) => true,
            Some(Tok::Ident(w)) => is_filter_word(w),
            _ => false,
        }
    }

    fn t_atom(&mut self) -> PResult<Transformation> {
        if self.starts_filter() {
            return Ok(Transformation::Select(self.filter()?));
        }
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                // `(` opens either a nested transformation or a filter group;
                // try the former and fall back when a filter operator follows.
                let (save_pos, save_spans) = (self.pos, self.rule_spans.len());
                let open = self.here();
                self.pos += 1;
                let nested = self.transformation().and_then(|t| self.close(open).map(|()| t));
                match nested {
                    Ok(t) if !self.at_filter_operator() => Ok(t),
                    outcome => {
                        self.pos = save_pos;
                        self.rule_spans.truncate(save_spans);
                        match self.filter() {
                            Ok(f) => Ok(Transformation::Select(f)),
                            Err(e) => Err(outcome.err().unwrap_or(e)),
                        }
                    }
                }
            }
            Some(Tok::Bang) => {
                let bang = self.here();
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Ident(_)) => {
                        let Transformation::Rule(rule) = self.rule(Some(bang))? else {
                            unreachable!()
                        };
                        Ok(Transformation::Rule(rule.negate()))
                    }
                    _ => Err(self.unexpected("a rule after '!'")),
                }
            }
            Some(Tok::Ident(_)) => self.rule(None),
            _ => Err(self.unexpected("a rule, a filter or '('")),
        }
    }

    fn rule(&mut self, bang: Option<SourceSpan>) -> PResult<Transformation> {
        let name_span = self.here();
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            unreachable!()
        };
        let Some(kind) = RuleKind::from_name(&name) else {
            return Err(DslDiagnostic::error(format!("unknown rule name '{name}'"), name_span));
        };
        self.pos += 1;
        let index = self.rule_spans.len();
        self.rule_spans.push(name_span);
        if self.peek() != Some(&Tok::LParen) {
            if kind == RuleKind::HasPredicateP {
                self.finish_rule_span(index, bang);
                return Ok(Transformation::Rule(Rule {
                    kind,
                    filter: None,
                    negated: false,
                }));
            }
            return Err(DslDiagnostic::error(
                format!("arity mismatch: {name} expects a position filter argument"),
                name_span,
            ));
        }
        let open = self.here();
        self.pos += 1;
        let mut args = vec![self.filter()?];
        while self.eat(&Tok::Comma) {
            args.push(self.filter()?);
        }
        self.close(open)?;
        let max = if kind == RuleKind::ResTooLong { 3 } else { 1 };
        if args.len() > max {
            let span = SourceSpan {
                end: self.prev_end(),
                ..name_span
            };
            return Err(DslDiagnostic::error(
                format!(
                    "arity mismatch: {name} takes at most {max} filter argument(s), got {}",
                    args.len()
                ),
                span,
            ));
        }
        let filter = args.into_iter().reduce(Filter::or).expect("at least one argument");
        self.finish_rule_span(index, bang);
        Ok(Transformation::Rule(Rule::new(kind, filter)))
    }

    fn finish_rule_span(&mut self, index: usize, bang: Option<SourceSpan>) {
        let end = self.prev_end();
        let span = &mut self.rule_spans[index];
        if let Some(b) = bang {
            span.start = b.start;
            span.line = b.line;
            span.column = b.column;
        }
        span.end = end;
    }

    fn filter(&mut self) -> PResult<Filter> {
        let mut left = self.f_and()?;
        while matches!(self.peek(), Some(Tok::OrOr)) || matches!(self.peek(), Some(Tok::Ident(w)) if w == "or") {
            self.pos += 1;
            let right = self.f_and()?;
            left = left.or(right);
        }
        Ok(left)
    }

    fn f_and(&mut self) -> PResult<Filter> {
        let mut left = self.f_atom()?;
        while self.eat(&Tok::AndAnd) {
            let right = self.f_atom()?;
            left = left.and(right);
        }
        Ok(left)
    }

    fn f_atom(&mut self) -> PResult<Filter> {
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(match v {
                    's' => Filter::Subjects,
                    'p' => Filter::Predicates,
                    _ => Filter::Objects,
                })
            }
            Some(Tok::Ident(w)) if w == "getSubjects" || w == "getPredicates" || w == "getObjects" => {
                self.pos += 1;
                Ok(match w.as_str() {
                    "getSubjects" => Filter::Subjects,
                    "getPredicates" => Filter::Predicates,
                    _ => Filter::Objects,
                })
            }
            Some(Tok::Ident(w)) if w == "distinct" || w == "getDistinct" => {
                self.pos += 1;
                let open = self.open(&w)?;
                let inner = self.filter()?;
                self.close(open)?;
                Ok(inner.distinct())
            }
            Some(Tok::LParen) => {
                let open = self.here();
                self.pos += 1;
                let inner = self.filter()?;
                self.close(open)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a position filter (?s, ?p, ?o or distinct(...))")),
        }
    }
}

fn is_filter_word(w: &str) -> bool {
    matches!(
        w,
        "distinct" | "getDistinct" | "getSubjects" | "getPredicates" | "getObjects"
    )
}
