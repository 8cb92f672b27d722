//! Random datasets and a hand-written reference scan for the built-in metrics.
//!
//! The reference does not use the rule engine or the XSD validators: it
//! encodes each metric's definition directly, and literal validity comes
//! from the tables the random datasets are drawn from.

#![allow(dead_code)]

use std::collections::HashMap;

use distqa_core::rdf::{Dataset, Term, Triple};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INTERNAL: &str = "http://ex.org/";
pub const EXTERNAL: &str = "http://other.org/";
const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
const DCT: &str = "http://purl.org/dc/terms/";

pub const THRESHOLD: usize = 95;

const LICENSE_PREDICATES: [&str; 5] = [
    "http://purl.org/dc/terms/license",
    "http://purl.org/dc/terms/rights",
    "http://creativecommons.org/ns#license",
    "http://www.w3.org/1999/xhtml/vocab#license",
    "http://schema.org/license",
];

const INDICATION_PREDICATES: [&str; 3] = [
    "http://purl.org/dc/terms/rights",
    "http://purl.org/dc/elements/1.1/rights",
    "http://purl.org/dc/terms/licenseDocument",
];

const LABEL_PREDICATES: [&str; 5] = [
    "http://www.w3.org/2000/01/rdf-schema#label",
    "http://www.w3.org/2004/02/skos/core#prefLabel",
    "http://www.w3.org/2004/02/skos/core#altLabel",
    "http://xmlns.com/foaf/0.1/name",
    "http://purl.org/dc/terms/title",
];

/// (datatype local name, lexical form, valid?)
pub const TYPED: [(&str, &str, bool); 24] = [
    ("integer", "42", true),
    ("integer", "-0", true),
    ("integer", "+17", true),
    ("integer", "4.2", false),
    ("integer", "abc", false),
    ("int", "2147483647", true),
    ("int", "2147483648", false),
    ("byte", "-128", true),
    ("byte", "200", false),
    ("nonNegativeInteger", "-1", false),
    ("decimal", "3.14", true),
    ("decimal", ".5", true),
    ("decimal", "1e3", false),
    ("double", "1.0E-3", true),
    ("double", "INF", true),
    ("double", "infinity", false),
    ("boolean", "true", true),
    ("boolean", "0", true),
    ("boolean", "TRUE", false),
    ("date", "2024-02-29", true),
    ("date", "2023-02-29", false),
    ("dateTime", "2024-01-01T12:00:00Z", true),
    ("dateTime", "2024-01-01 12:00:00", false),
    ("string", "anything", true),
];

const PLAIN: [&str; 8] = [
    "hello",
    "Copyright 2019 Example Corp",
    "All Rights Reserved",
    "licensed under CC-BY",
    "Licence: ODbL",
    "nothing to see",
    "",
    "tab\tand \"quote\"",
];

fn iri(s: String) -> Term {
    Term::iri(s).expect("test IRI")
}

pub struct RandomProfile {
    pub max_triples: usize,
}

/// A random dataset covering every rule's interesting cases, including
/// duplicates, blank nodes, long IRIs and unknown datatypes.
pub fn random_dataset(seed: u64, max_triples: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = if rng.gen_bool(0.02) {
        0
    } else {
        rng.gen_range(1..=max_triples)
    };
    let n_entities = rng.gen_range(1..=(n / 3).max(2));
    let long_tail = "y".repeat(THRESHOLD);
    let entity = |rng: &mut ChaCha8Rng| -> Term {
        let k = rng.gen_range(0..n_entities);
        match rng.gen_range(0..10) {
            0..=4 => iri(format!("{INTERNAL}r/{k}")),
            5..=6 => iri(format!("{EXTERNAL}r/{k}")),
            7 => Term::blank(format!("b{k}")).expect("label"),
            8 => iri(format!("{INTERNAL}{}/{k}", &long_tail[..rng.gen_range(60..=THRESHOLD)])),
            _ => iri(format!("urn:x-{k}")),
        }
    };
    let predicate = |rng: &mut ChaCha8Rng| -> Term {
        match rng.gen_range(0..10) {
            0 => iri(LICENSE_PREDICATES.choose(rng).unwrap().to_string()),
            1 => iri(INDICATION_PREDICATES.choose(rng).unwrap().to_string()),
            2..=3 => iri(LABEL_PREDICATES.choose(rng).unwrap().to_string()),
            4 => iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type".into()),
            5..=7 => iri(format!("{INTERNAL}p{}", rng.gen_range(0..5))),
            8 => iri(format!("{EXTERNAL}p{}", rng.gen_range(0..5))),
            _ => iri(format!("{INTERNAL}label-like/{}", "z".repeat(rng.gen_range(70..110)))),
        }
    };
    let literal = |rng: &mut ChaCha8Rng| -> Term {
        match rng.gen_range(0..6) {
            0 | 1 => Term::string(*PLAIN.choose(rng).unwrap()),
            2 => Term::lang_string(*PLAIN.choose(rng).unwrap(), "en-GB").expect("tag"),
            3 | 4 => {
                let (dt, lex, _) = TYPED.choose(rng).unwrap();
                Term::typed(*lex, format!("{XSD}{dt}")).expect("datatype IRI")
            }
            _ => Term::typed("12", format!("{INTERNAL}dt/unknown")).expect("datatype IRI"),
        }
    };
    let mut triples: Vec<Triple> = Vec::with_capacity(n);
    while triples.len() < n {
        if !triples.is_empty() && rng.gen_bool(0.05) {
            let dup = triples[rng.gen_range(0..triples.len())].clone();
            triples.push(dup);
            continue;
        }
        let s = entity(&mut rng);
        let p = predicate(&mut rng);
        let o = if rng.gen_bool(0.45) {
            literal(&mut rng)
        } else {
            entity(&mut rng)
        };
        triples.push(Triple::new(s, p, o).expect("well-formed"));
    }
    Dataset::from_triples(format!("random-{seed}"), triples)
}

pub fn shuffled(d: &Dataset, seed: u64) -> Dataset {
    let mut triples = d.triples.clone();
    triples.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Dataset::from_triples(d.origin.clone(), triples)
}

/// Reference values for the built-ins in canonical order
/// (L1, L2, I2, U1, RC1, SV3, CN2), with internal prefix [`INTERNAL`] and
/// the default context otherwise.
pub fn reference(d: &Dataset) -> [f64; 7] {
    let validity: HashMap<(String, &str), bool> = TYPED
        .iter()
        .map(|(dt, lex, ok)| ((format!("{XSD}{dt}"), *lex), *ok))
        .collect();
    let iri_of = |t: &Term| t.as_iri().map(str::to_string);
    let internal = |t: &Term| iri_of(t).is_some_and(|i| i.starts_with(INTERNAL));
    let external = |t: &Term| iri_of(t).is_some_and(|i| !i.starts_with(INTERNAL));
    let phrase = |t: &Term| {
        t.as_literal().is_some_and(|l| {
            let s = l.lexical().to_lowercase();
            s.contains("license")
                || s.contains("licence")
                || s.contains("copyright")
                || s.contains("all rights reserved")
        })
    };
    let too_long = |t: &Term| iri_of(t).is_some_and(|i| i.chars().count() > THRESHOLD);

    let n = d.triples.len() as u64;
    let (mut l1, mut l2, mut links, mut r1, mut r2, mut r3, mut long, mut bad, mut uri_uri) =
        (false, false, 0u64, 0u64, 0u64, 0u64, 0u64, 0u64, 0u64);
    for t in &d.triples {
        let (s, p, o) = (t.subject(), t.predicate(), t.object());
        let pi = p.as_iri().unwrap();
        let label = LABEL_PREDICATES.contains(&pi);
        l1 |= LICENSE_PREDICATES.contains(&pi);
        l2 |= s.is_iri() && INDICATION_PREDICATES.contains(&pi) && phrase(o);
        if (internal(s) && external(o)) || (external(s) && internal(o)) {
            links += 1;
        }
        r1 += u64::from(internal(s) && label);
        r2 += u64::from(pi.starts_with(INTERNAL) && label);
        r3 += u64::from(internal(o) && label);
        long += u64::from(too_long(s) || too_long(p) || too_long(o));
        if let Some(lit) = o.as_literal() {
            let dt = lit.datatype();
            let plain = dt == format!("{XSD}string") || lit.lang().is_some();
            if !plain && validity.get(&(dt.to_string(), lit.lexical())) == Some(&false) {
                bad += 1;
            }
        }
        uri_uri += u64::from(s.is_iri() && o.is_iri());
    }
    let ratio = |a: f64| if n == 0 { 0.0 } else { a / n as f64 };
    [
        f64::from(u8::from(l1)),
        f64::from(u8::from(l2)),
        ratio(links as f64),
        ratio((r1 + r2 + r3) as f64),
        ratio(long as f64),
        bad as f64,
        ratio(n as f64 - uri_uri as f64),
    ]
}

pub fn dct(local: &str) -> String {
    format!("{DCT}{local}")
}
