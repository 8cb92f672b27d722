use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::vocab::{RDF_LANG_STRING, XSD_STRING};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("invalid IRI {0:?}: {1}")]
    Iri(String, &'static str),
    #[error("invalid blank node label {0:?}")]
    BlankNode(String),
    #[error("invalid language tag {0:?}")]
    LangTag(String),
    #[error("subject must be an IRI or blank node")]
    LiteralSubject,
    #[error("predicate must be an IRI")]
    NonIriPredicate,
}

/// A triple position; the `?s`, `?p`, `?o` of the metric language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    Subject,
    Predicate,
    Object,
}

impl Position {
    pub const ALL: [Position; 3] = [Position::Subject, Position::Predicate, Position::Object];

    pub fn index(self) -> usize {
        match self {
            Position::Subject => 0,
            Position::Predicate => 1,
            Position::Object => 2,
        }
    }
}

/// Literal value: lexical form, datatype IRI and optional language tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    lexical: Arc<str>,
    datatype: Arc<str>,
    lang: Option<Arc<str>>,
}

impl Literal {
    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &str {
        &self.datatype
    }

    pub fn lang(&self) -> Option<&str> {
        self.lang.as_deref()
    }

    /// True when the datatype is neither `xsd:string` nor `rdf:langString`.
    pub fn is_typed(&self) -> bool {
        &*self.datatype != XSD_STRING && &*self.datatype != RDF_LANG_STRING
    }
}

/// An RDF node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(Arc<str>),
    BlankNode(Arc<str>),
    Literal(Arc<Literal>),
}

pub(crate) fn check_iri(iri: &str) -> Result<(), TermError> {
    if iri.is_empty() {
        return Err(TermError::Iri(iri.into(), "empty"));
    }
    if iri.chars().any(is_forbidden_iri_char) {
        return Err(TermError::Iri(iri.into(), "forbidden character"));
    }
    if !has_scheme(iri) {
        return Err(TermError::Iri(iri.into(), "relative IRI"));
    }
    Ok(())
}

pub(crate) fn is_forbidden_iri_char(c: char) -> bool {
    c <= ' ' || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
}

fn has_scheme(iri: &str) -> bool {
    let mut chars = iri.char_indices();
    match chars.next() {
        Some((_, c)) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    for (_, c) in chars {
        match c {
            ':' => return true,
            c if c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.') => {}
            _ => return false,
        }
    }
    false
}

pub(crate) fn check_lang(tag: &str) -> Result<(), TermError> {
    let mut parts = tag.split('-');
    let first = parts.next().unwrap_or("");
    let ok = !first.is_empty()
        && first.bytes().all(|b| b.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_alphanumeric()));
    if ok {
        Ok(())
    } else {
        Err(TermError::LangTag(tag.into()))
    }
}

impl Term {
    pub fn iri(iri: impl Into<Arc<str>>) -> Result<Term, TermError> {
        let iri = iri.into();
        check_iri(&iri)?;
        Ok(Term::Iri(iri))
    }

    pub fn blank(label: impl Into<Arc<str>>) -> Result<Term, TermError> {
        let label = label.into();
        if !super::ntriples::is_valid_blank_label(&label) {
            return Err(TermError::BlankNode(label.to_string()));
        }
        Ok(Term::BlankNode(label))
    }

    /// Plain literal; datatype `xsd:string`.
    pub fn string(lexical: impl Into<Arc<str>>) -> Term {
        Term::Literal(Arc::new(Literal {
            lexical: lexical.into(),
            datatype: XSD_STRING.into(),
            lang: None,
        }))
    }

    pub fn typed(lexical: impl Into<Arc<str>>, datatype: impl Into<Arc<str>>) -> Result<Term, TermError> {
        let datatype = datatype.into();
        check_iri(&datatype)?;
        Ok(Term::Literal(Arc::new(Literal {
            lexical: lexical.into(),
            datatype,
            lang: None,
        })))
    }

    pub fn lang_string(lexical: impl Into<Arc<str>>, lang: impl Into<Arc<str>>) -> Result<Term, TermError> {
        let lang = lang.into();
        check_lang(&lang)?;
        Ok(Term::Literal(Arc::new(Literal {
            lexical: lexical.into(),
            datatype: RDF_LANG_STRING.into(),
            lang: Some(lang),
        })))
    }

    /// Literal built from already-validated parts (parser fast path).
    pub(crate) fn literal_unchecked(lexical: Arc<str>, datatype: Arc<str>, lang: Option<Arc<str>>) -> Term {
        Term::Literal(Arc::new(Literal {
            lexical,
            datatype,
            lang,
        }))
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        super::ntriples::write_term(&mut out, self);
        f.write_str(&out)
    }
}

/// An RDF statement. Subject is never a literal; predicate is always an IRI.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    terms: [Term; 3],
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Triple, TermError> {
        if subject.is_literal() {
            return Err(TermError::LiteralSubject);
        }
        if !predicate.is_iri() {
            return Err(TermError::NonIriPredicate);
        }
        Ok(Triple {
            terms: [subject, predicate, object],
        })
    }

    pub fn subject(&self) -> &Term {
        &self.terms[0]
    }

    pub fn predicate(&self) -> &Term {
        &self.terms[1]
    }

    pub fn object(&self) -> &Term {
        &self.terms[2]
    }

    pub fn term(&self, pos: Position) -> &Term {
        &self.terms[pos.index()]
    }

    /// Predicate IRI string.
    pub fn predicate_iri(&self) -> &str {
        match &self.terms[1] {
            Term::Iri(iri) => iri,
            _ => unreachable!("predicate is always an IRI"),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::ntriples::serialize_triple(self))
    }
}
