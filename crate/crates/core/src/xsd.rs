//! Lexical-space checks for the XSD datatypes the syntactic-validity metric
//! knows about.

use std::collections::HashMap;
use std::fmt;

use crate::rdf::vocab::{RDF_LANG_STRING, XSD};

pub type LexicalValidator = fn(&str) -> bool;

/// Maps datatype IRIs to lexical-form validators.
#[derive(Clone)]
pub struct DatatypeRegistry {
    validators: HashMap<String, LexicalValidator>,
}

impl fmt::Debug for DatatypeRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<_> = self.validators.keys().collect();
        names.sort();
        f.debug_struct("DatatypeRegistry").field("datatypes", &names).finish()
    }
}

impl Default for DatatypeRegistry {
    fn default() -> Self {
        let mut validators: HashMap<String, LexicalValidator> = HashMap::new();
        let mut add = |local: &str, v: LexicalValidator| {
            validators.insert(format!("{XSD}{local}"), v);
        };
        add("string", |_| true);
        add("integer", |s| integer_in(s, None, None));
        add("int", |s| integer_in(s, Some(i32::MIN as i128), Some(i32::MAX as i128)));
        add("long", |s| {
            integer_in(s, Some(i64::MIN as i128), Some(i64::MAX as i128))
        });
        add("short", |s| {
            integer_in(s, Some(i16::MIN as i128), Some(i16::MAX as i128))
        });
        add("byte", |s| integer_in(s, Some(i8::MIN as i128), Some(i8::MAX as i128)));
        add("nonNegativeInteger", |s| integer_in(s, Some(0), None));
        add("positiveInteger", |s| integer_in(s, Some(1), None));
        add("nonPositiveInteger", |s| integer_in(s, None, Some(0)));
        add("negativeInteger", |s| integer_in(s, None, Some(-1)));
        add("unsignedLong", |s| integer_in(s, Some(0), Some(u64::MAX as i128)));
        add("unsignedInt", |s| integer_in(s, Some(0), Some(u32::MAX as i128)));
        add("unsignedShort", |s| integer_in(s, Some(0), Some(u16::MAX as i128)));
        add("unsignedByte", |s| integer_in(s, Some(0), Some(u8::MAX as i128)));
        add("decimal", is_decimal);
        add("double", is_double);
        add("float", is_double);
        add("boolean", |s| matches!(s, "true" | "false" | "1" | "0"));
        add("dateTime", is_date_time);
        add("date", is_date);
        add("anyURI", is_any_uri);
        validators.insert(RDF_LANG_STRING.to_string(), |_| true);
        DatatypeRegistry { validators }
    }
}

impl DatatypeRegistry {
    pub fn empty() -> Self {
        DatatypeRegistry {
            validators: HashMap::new(),
        }
    }

    pub fn insert(&mut self, datatype: impl Into<String>, validator: LexicalValidator) {
        self.validators.insert(datatype.into(), validator);
    }

    /// `None` when the datatype has no registered validator.
    pub fn check(&self, datatype: &str, lexical: &str) -> Option<bool> {
        self.validators.get(datatype).map(|v| v(lexical))
    }

    pub fn knows(&self, datatype: &str) -> bool {
        self.validators.contains_key(datatype)
    }

    pub fn datatypes(&self) -> impl Iterator<Item = &str> {
        self.validators.keys().map(String::as_str)
    }
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn split_sign(s: &str) -> (bool, &str) {
    match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    }
}

fn integer_in(s: &str, min: Option<i128>, max: Option<i128>) -> bool {
    let (negative, digits) = split_sign(s);
    if !all_digits(digits) {
        return false;
    }
    let significant = digits.trim_start_matches('0');
    if significant.len() > 38 {
        // Beyond i128; only unbounded sides accept it.
        return if negative { min.is_none() } else { max.is_none() };
    }
    let magnitude: i128 = if significant.is_empty() {
        0
    } else {
        significant.parse().expect("digits")
    };
    let value = if negative { -magnitude } else { magnitude };
    min.map_or(true, |m| value >= m) && max.map_or(true, |m| value <= m)
}

fn is_decimal(s: &str) -> bool {
    let (_, body) = split_sign(s);
    match body.split_once('.') {
        Some((int, frac)) => {
            (int.is_empty() || all_digits(int))
                && (frac.is_empty() || all_digits(frac))
                && !(int.is_empty() && frac.is_empty())
        }
        None => all_digits(body),
    }
}

fn is_double(s: &str) -> bool {
    if matches!(s, "INF" | "+INF" | "-INF" | "NaN") {
        return true;
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    is_decimal(mantissa)
        && exponent.map_or(true, |e| {
            let (_, digits) = split_sign(e);
            all_digits(digits)
        })
}

fn two_digits(s: &str) -> Option<u32> {
    (s.len() == 2 && all_digits(s)).then(|| s.parse().expect("digits"))
}

fn is_leap(year: i64) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

/// `-?YYYY-MM-DD` without timezone; returns the remainder.
fn date_part(s: &str) -> Option<&str> {
    let body = s.strip_prefix('-').unwrap_or(s);
    let year_len = body.bytes().take_while(u8::is_ascii_digit).count();
    if year_len < 4 || (year_len > 4 && body.starts_with('0')) {
        return None;
    }
    let year: i64 = body[..year_len].parse().ok()?;
    let rest = body[year_len..].strip_prefix('-')?;
    let month = two_digits(rest.get(..2)?)?;
    let rest = rest[2..].strip_prefix('-')?;
    let day = two_digits(rest.get(..2)?)?;
    let days_in_month = match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap(year) => 29,
        2 => 28,
        _ => return None,
    };
    (1..=days_in_month).contains(&day).then(|| &rest[2..])
}

fn is_timezone(s: &str) -> bool {
    if s.is_empty() || s == "Z" {
        return true;
    }
    let Some(body) = s.strip_prefix('+').or_else(|| s.strip_prefix('-')) else {
        return false;
    };
    match (
        body.get(..2).and_then(two_digits),
        body.get(2..3),
        body.get(3..).and_then(two_digits),
    ) {
        (Some(h), Some(":"), Some(m)) => (h < 14 && m < 60) || (h == 14 && m == 0),
        _ => false,
    }
}

fn is_date(s: &str) -> bool {
    date_part(s).is_some_and(is_timezone)
}

fn is_date_time(s: &str) -> bool {
    let Some(rest) = date_part(s).and_then(|r| r.strip_prefix('T')) else {
        return false;
    };
    let (Some(h), Some(":"), Some(m), Some(":"), Some(sec)) = (
        rest.get(..2).and_then(two_digits),
        rest.get(2..3),
        rest.get(3..5).and_then(two_digits),
        rest.get(5..6),
        rest.get(6..8).and_then(two_digits),
    ) else {
        return false;
    };
    let mut rest = &rest[8..];
    let mut fraction_zero = true;
    if let Some(frac) = rest.strip_prefix('.') {
        let n = frac.bytes().take_while(u8::is_ascii_digit).count();
        if n == 0 {
            return false;
        }
        fraction_zero = frac[..n].bytes().all(|b| b == b'0');
        rest = &frac[n..];
    }
    let time_ok = (h < 24 && m < 60 && sec < 60) || (h == 24 && m == 0 && sec == 0 && fraction_zero);
    time_ok && is_timezone(rest)
}

fn is_any_uri(s: &str) -> bool {
    !s.chars().any(|c| c.is_control())
}
