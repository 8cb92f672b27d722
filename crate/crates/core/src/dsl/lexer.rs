use super::{DslDiagnostic, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Var(char),
    Number(f64),
    Str(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Bang,
    AndAnd,
    OrOr,
    /// `AND` or `∩`
    Inter,
    /// `OR` or `∪`
    Union,
    Define,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Var(c) => format!("'?{c}'"),
            Tok::Number(n) => format!("number {n}"),
            Tok::Str(_) => "string".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Bang => "'!'".into(),
            Tok::AndAnd => "'&&'".into(),
            Tok::OrOr => "'||'".into(),
            Tok::Inter => "'AND'".into(),
            Tok::Union => "'OR'".into(),
            Tok::Define => "':='".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        self.src[self.pos..].chars().nth(1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn mark(&self) -> (usize, u32, u32) {
        (self.pos, self.line, self.col)
    }

    fn span_from(&self, (start, line, column): (usize, u32, u32)) -> SourceSpan {
        SourceSpan {
            start,
            end: self.pos,
            line,
            column,
        }
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, DslDiagnostic> {
    let mut lx = Lexer {
        src,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut out = Vec::new();
    while let Some(c) = lx.peek() {
        if c.is_whitespace() {
            lx.bump();
            continue;
        }
        if c == '#' {
            while !matches!(lx.peek(), None | Some('\n')) {
                lx.bump();
            }
            continue;
        }
        let m = lx.mark();
        let tok = match c {
            '(' | ')' | ',' | '+' | '-' | '*' | '/' | '!' | '∩' | '∪' => {
                lx.bump();
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '!' => Tok::Bang,
                    '∩' => Tok::Inter,
                    _ => Tok::Union,
                }
            }
            '&' | '|' | ':' => {
                let want = match c {
                    '&' => '&',
                    '|' => '|',
                    _ => '=',
                };
                lx.bump();
                if lx.peek() != Some(want) {
                    return Err(DslDiagnostic::error(
                        format!("unexpected character '{c}'; did you mean '{c}{want}'?"),
                        lx.span_from(m),
                    ));
                }
                lx.bump();
                match c {
                    '&' => Tok::AndAnd,
                    '|' => Tok::OrOr,
                    _ => Tok::Define,
                }
            }
            '?' => {
                lx.bump();
                match lx.peek() {
                    Some(v @ ('s' | 'p' | 'o')) if !lx.peek2().is_some_and(is_ident_char) => {
                        lx.bump();
                        Tok::Var(v)
                    }
                    _ => {
                        while lx.peek().is_some_and(is_ident_char) {
                            lx.bump();
                        }
                        return Err(DslDiagnostic::error(
                            "unknown position variable; expected ?s, ?p or ?o",
                            lx.span_from(m),
                        ));
                    }
                }
            }
            '"' => {
                lx.bump();
                let mut s = String::new();
                loop {
                    match lx.bump() {
                        None | Some('\n') => {
                            return Err(DslDiagnostic::error("unterminated string", lx.span_from(m)));
                        }
                        Some('"') => break,
                        Some('\\') => match lx.bump() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            _ => return Err(DslDiagnostic::error("bad escape in string", lx.span_from(m))),
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() || (c == '.' && lx.peek2().is_some_and(|d| d.is_ascii_digit())) => {
                while lx.peek().is_some_and(|d| d.is_ascii_digit() || d == '.') {
                    lx.bump();
                }
                if matches!(lx.peek(), Some('e' | 'E')) {
                    lx.bump();
                    if matches!(lx.peek(), Some('+' | '-')) {
                        lx.bump();
                    }
                    while lx.peek().is_some_and(|d| d.is_ascii_digit()) {
                        lx.bump();
                    }
                }
                let text = &src[m.0..lx.pos];
                match text.parse::<f64>() {
                    Ok(n) if n.is_finite() => Tok::Number(n),
                    _ => {
                        return Err(DslDiagnostic::error(
                            format!("malformed number '{text}'"),
                            lx.span_from(m),
                        ))
                    }
                }
            }
            c if c.is_alphabetic() || c == '_' => {
                while lx.peek().is_some_and(is_ident_char) {
                    lx.bump();
                }
                match &src[m.0..lx.pos] {
                    "AND" => Tok::Inter,
                    "OR" => Tok::Union,
                    word => Tok::Ident(word.to_string()),
                }
            }
            other => {
                lx.bump();
                return Err(DslDiagnostic::error(
                    format!("unexpected character '{other}'"),
                    lx.span_from(m),
                ));
            }
        };
        out.push(Token {
            tok,
            span: lx.span_from(m),
        });
    }
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}
