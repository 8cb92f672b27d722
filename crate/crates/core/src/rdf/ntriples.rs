//! W3C N-Triples line parser and canonical serializer.
//!
//! Reference: <https://www.w3.org/TR/n-triples/>

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use super::term::{check_lang, is_forbidden_iri_char, Term, Triple};
use super::vocab::{RDF_LANG_STRING, XSD_STRING};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseErrorKind {
    BadIri,
    BadBlankNode,
    BadLiteral,
    BadLangTag,
    BadEscape,
    MissingDot,
    UnexpectedToken,
    InvalidUtf8,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParseErrorKind::BadIri => "bad IRI",
            ParseErrorKind::BadBlankNode => "bad blank node",
            ParseErrorKind::BadLiteral => "bad literal",
            ParseErrorKind::BadLangTag => "bad language tag",
            ParseErrorKind::BadEscape => "bad escape",
            ParseErrorKind::MissingDot => "missing terminal dot",
            ParseErrorKind::UnexpectedToken => "unexpected token",
            ParseErrorKind::InvalidUtf8 => "invalid UTF-8",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, serde::Serialize)]
#[error("line {line}, byte {offset}: {kind}: {message}")]
pub struct ParseError {
    pub line: u64,
    /// Byte offset within the line.
    pub offset: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

/// Parses one physical line. `Ok(None)` for blank and comment lines.
pub fn parse_ntriples_line(line: &str, line_no: u64) -> Result<Option<Triple>, ParseError> {
    LineParser::default().parse_line(line, line_no)
}

/// Parses one physical line given as raw bytes; invalid UTF-8 is an error, never a panic.
pub fn parse_ntriples_bytes(line: &[u8], line_no: u64) -> Result<Option<Triple>, ParseError> {
    LineParser::default().parse_bytes(line, line_no)
}

/// Stateful line parser. Shares `Arc<str>` storage for repeated predicate
/// and datatype IRIs across the lines it parses.
#[derive(Default)]
pub struct LineParser {
    interned: HashMap<Box<str>, Arc<str>>,
}

const INTERN_LIMIT: usize = 1 << 16;

impl LineParser {
    pub fn parse_bytes(&mut self, line: &[u8], line_no: u64) -> Result<Option<Triple>, ParseError> {
        match std::str::from_utf8(line) {
            Ok(s) => self.parse_line(s, line_no),
            Err(e) => Err(ParseError {
                line: line_no,
                offset: e.valid_up_to(),
                kind: ParseErrorKind::InvalidUtf8,
                message: "line is not valid UTF-8".into(),
            }),
        }
    }

    pub fn parse_line(&mut self, line: &str, line_no: u64) -> Result<Option<Triple>, ParseError> {
        let line = line.strip_suffix('\n').unwrap_or(line);
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut cur = Cursor {
            src: line,
            pos: 0,
            line_no,
        };
        cur.skip_ws();
        if cur.at_end() || cur.peek() == Some(b'#') {
            return Ok(None);
        }
        let subject = match cur.peek() {
            Some(b'<') => Term::Iri(cur.iri()?.into()),
            Some(b'_') => cur.blank()?,
            Some(b'"') => return Err(cur.err(ParseErrorKind::UnexpectedToken, "literal in subject position")),
            _ => return Err(cur.err(ParseErrorKind::UnexpectedToken, "expected IRI or blank node subject")),
        };
        cur.skip_ws();
        let predicate = match cur.peek() {
            Some(b'<') => {
                let iri = cur.iri()?;
                Term::Iri(self.intern(&iri))
            }
            _ => return Err(cur.err(ParseErrorKind::UnexpectedToken, "expected IRI predicate")),
        };
        cur.skip_ws();
        let object = match cur.peek() {
            Some(b'<') => Term::Iri(cur.iri()?.into()),
            Some(b'_') => cur.blank()?,
            Some(b'"') => self.literal(&mut cur)?,
            None => return Err(cur.err(ParseErrorKind::UnexpectedToken, "missing object")),
            _ => {
                return Err(cur.err(
                    ParseErrorKind::UnexpectedToken,
                    "expected IRI, blank node or literal object",
                ))
            }
        };
        cur.skip_ws();
        if cur.peek() != Some(b'.') {
            return Err(cur.err(ParseErrorKind::MissingDot, "expected '.' after object"));
        }
        cur.pos += 1;
        cur.skip_ws();
        if !cur.at_end() && cur.peek() != Some(b'#') {
            return Err(cur.err(ParseErrorKind::UnexpectedToken, "trailing content after '.'"));
        }
        Ok(Some(
            Triple::new(subject, predicate, object).expect("grammar guarantees triple shape"),
        ))
    }

    fn intern(&mut self, s: &str) -> Arc<str> {
        if let Some(a) = self.interned.get(s) {
            return a.clone();
        }
        let a: Arc<str> = s.into();
        if self.interned.len() < INTERN_LIMIT {
            self.interned.insert(s.into(), a.clone());
        }
        a
    }

    fn literal(&mut self, cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
        let lexical = cur.string()?;
        // Whitespace may separate the string from '^^' or '@'.
        let save = cur.pos;
        cur.skip_ws();
        match cur.peek() {
            Some(b'@') => {
                let start = cur.pos;
                cur.pos += 1;
                while matches!(cur.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'-') {
                    cur.pos += 1;
                }
                let tag = &cur.src[start + 1..cur.pos];
                if check_lang(tag).is_err() {
                    cur.pos = start;
                    return Err(cur.err(
                        ParseErrorKind::BadLangTag,
                        "language tag must match [a-zA-Z]+(-[a-zA-Z0-9]+)*",
                    ));
                }
                Ok(Term::literal_unchecked(
                    lexical.into(),
                    self.intern(RDF_LANG_STRING),
                    Some(self.intern(tag)),
                ))
            }
            Some(b'^') => {
                if !cur.src[cur.pos..].starts_with("^^") {
                    return Err(cur.err(ParseErrorKind::BadLiteral, "expected '^^'"));
                }
                cur.pos += 2;
                cur.skip_ws();
                if cur.peek() != Some(b'<') {
                    return Err(cur.err(ParseErrorKind::BadLiteral, "expected datatype IRI after '^^'"));
                }
                let dt = cur.iri()?;
                Ok(Term::literal_unchecked(lexical.into(), self.intern(&dt), None))
            }
            _ => {
                cur.pos = save;
                Ok(Term::literal_unchecked(lexical.into(), self.intern(XSD_STRING), None))
            }
        }
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line_no: u64,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn err(&self, kind: ParseErrorKind, message: &str) -> ParseError {
        ParseError {
            line: self.line_no,
            offset: self.pos,
            kind,
            message: message.to_string(),
        }
    }

    fn next_char(&mut self) -> Option<char> {
        let c = self.src[self.pos..].chars().next()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    /// `\uXXXX` or `\UXXXXXXXX`; cursor sits on the `u`/`U`.
    fn uchar(&mut self) -> Result<char, ParseError> {
        let start = self.pos - 1;
        let len = match self.peek() {
            Some(b'u') => 4,
            Some(b'U') => 8,
            _ => unreachable!(),
        };
        self.pos += 1;
        let hex = self
            .src
            .get(self.pos..self.pos + len)
            .filter(|h| h.bytes().all(|b| b.is_ascii_hexdigit()));
        let Some(hex) = hex else {
            self.pos = start;
            return Err(self.err(ParseErrorKind::BadEscape, "malformed numeric escape"));
        };
        let code = u32::from_str_radix(hex, 16).expect("checked hex digits");
        match char::from_u32(code) {
            Some(c) => {
                self.pos += len;
                Ok(c)
            }
            None => {
                self.pos = start;
                Err(self.err(ParseErrorKind::BadEscape, "escape is not a Unicode scalar value"))
            }
        }
    }

    fn iri(&mut self) -> Result<String, ParseError> {
        let open = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            let before = self.pos;
            match self.next_char() {
                None => {
                    self.pos = open;
                    return Err(self.err(ParseErrorKind::BadIri, "unterminated IRI"));
                }
                Some('>') => break,
                Some('\\') => match self.peek() {
                    Some(b'u' | b'U') => {
                        let c = self.uchar()?;
                        if is_forbidden_iri_char(c) {
                            self.pos = before;
                            return Err(self.err(ParseErrorKind::BadIri, "escaped character not allowed in IRI"));
                        }
                        out.push(c);
                    }
                    _ => {
                        self.pos = before;
                        return Err(self.err(
                            ParseErrorKind::BadEscape,
                            "only \\u and \\U escapes are allowed in IRIs",
                        ));
                    }
                },
                Some(c) if is_forbidden_iri_char(c) => {
                    self.pos = before;
                    return Err(self.err(ParseErrorKind::BadIri, "character not allowed in IRI"));
                }
                Some(c) => out.push(c),
            }
        }
        if let Err(e) = super::term::check_iri(&out) {
            self.pos = open;
            return Err(self.err(ParseErrorKind::BadIri, &e.to_string()));
        }
        Ok(out)
    }

    fn blank(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        if !self.src[self.pos..].starts_with("_:") {
            return Err(self.err(ParseErrorKind::BadBlankNode, "expected '_:'"));
        }
        self.pos += 2;
        let label_start = self.pos;
        match self.src[self.pos..].chars().next() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => self.pos += c.len_utf8(),
            _ => {
                self.pos = start;
                return Err(self.err(
                    ParseErrorKind::BadBlankNode,
                    "invalid first character in blank node label",
                ));
            }
        }
        while let Some(c) = self.src[self.pos..].chars().next() {
            if is_pn_chars(c) || c == '.' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        // A label never ends in '.'; give trailing dots back to the statement.
        while self.src[..self.pos].ends_with('.') && self.pos > label_start + 1 {
            self.pos -= 1;
        }
        Ok(Term::BlankNode(self.src[label_start..self.pos].into()))
    }

    fn string(&mut self) -> Result<String, ParseError> {
        let open = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            let before = self.pos;
            match self.next_char() {
                None => {
                    self.pos = open;
                    return Err(self.err(ParseErrorKind::BadLiteral, "unterminated string literal"));
                }
                Some('"') => return Ok(out),
                Some('\\') => {
                    let c = match self.peek() {
                        Some(b'u' | b'U') => self.uchar()?,
                        escape => {
                            let c = match escape {
                                Some(b't') => '\t',
                                Some(b'b') => '\u{8}',
                                Some(b'n') => '\n',
                                Some(b'r') => '\r',
                                Some(b'f') => '\u{c}',
                                Some(b'"') => '"',
                                Some(b'\'') => '\'',
                                Some(b'\\') => '\\',
                                _ => {
                                    self.pos = before;
                                    return Err(self.err(ParseErrorKind::BadEscape, "unknown string escape"));
                                }
                            };
                            self.pos += 1;
                            c
                        }
                    };
                    out.push(c);
                }
                Some('\r' | '\n') => {
                    self.pos = before;
                    return Err(self.err(ParseErrorKind::BadLiteral, "raw line break in string literal"));
                }
                Some(c) => out.push(c),
            }
        }
    }
}

fn is_pn_chars_base(c: char) -> bool {
    matches!(c,
        'A'..='Z' | 'a'..='z'
        | '\u{C0}'..='\u{D6}' | '\u{D8}'..='\u{F6}' | '\u{F8}'..='\u{2FF}'
        | '\u{370}'..='\u{37D}' | '\u{37F}'..='\u{1FFF}' | '\u{200C}'..='\u{200D}'
        | '\u{2070}'..='\u{218F}' | '\u{2C00}'..='\u{2FEF}' | '\u{3001}'..='\u{D7FF}'
        | '\u{F900}'..='\u{FDCF}' | '\u{FDF0}'..='\u{FFFD}' | '\u{10000}'..='\u{EFFFF}')
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_' || c == ':'
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c)
        || c == '-'
        || c.is_ascii_digit()
        || c == '\u{B7}'
        || ('\u{300}'..='\u{36F}').contains(&c)
        || ('\u{203F}'..='\u{2040}').contains(&c)
}

pub(crate) fn is_valid_blank_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {}
        _ => return false,
    }
    !label.ends_with('.') && chars.all(|c| is_pn_chars(c) || c == '.')
}

/// Canonical single-line form of a triple, terminated by ` .` (no newline).
pub fn serialize_triple(t: &Triple) -> String {
    let mut out = String::with_capacity(128);
    write_triple(&mut out, t);
    out
}

pub fn write_triple(out: &mut String, t: &Triple) {
    write_term(out, t.subject());
    out.push(' ');
    write_term(out, t.predicate());
    out.push(' ');
    write_term(out, t.object());
    out.push_str(" .");
}

/// One line per triple, each ending in a newline.
pub fn write_ntriples<'a>(out: &mut String, triples: impl IntoIterator<Item = &'a Triple>) {
    for t in triples {
        write_triple(out, t);
        out.push('\n');
    }
}

pub fn write_term(out: &mut String, term: &Term) {
    match term {
        Term::Iri(iri) => {
            out.push('<');
            out.push_str(iri);
            out.push('>');
        }
        Term::BlankNode(label) => {
            out.push_str("_:");
            out.push_str(label);
        }
        Term::Literal(lit) => {
            out.push('"');
            for c in lit.lexical().chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\r' => out.push_str("\\r"),
                    '\t' => out.push_str("\\t"),
                    '\u{8}' => out.push_str("\\b"),
                    '\u{c}' => out.push_str("\\f"),
                    c if c < ' ' || c == '\u{7f}' => {
                        let _ = write!(out, "\\u{:04X}", c as u32);
                    }
                    c => out.push(c),
                }
            }
            out.push('"');
            if let Some(lang) = lit.lang() {
                out.push('@');
                out.push_str(lang);
            } else if lit.datatype() != XSD_STRING {
                out.push_str("^^<");
                out.push_str(lit.datatype());
                out.push('>');
            }
        }
    }
}
