//! Deterministic synthetic datasets with known metric values.
//!
//! Triples come in fixed categories: an optional license statement, links
//! between the internal and an external namespace, literal-valued triples
//! (some typed literals deliberately malformed), and internal links. Some
//! triples carry one over-long internal IRI. All IRIs are internal except
//! the external link ends, so the expected values follow from the category
//! sizes alone.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::vocab::{DCTERMS, RDF_LANG_STRING, XSD};
use crate::rdf::{Term, Triple};

pub const INTERNAL_PREFIX: &str = "http://gen.example.org/";
pub const EXTERNAL_PREFIX: &str = "http://ext.example.net/";
/// Long IRIs exceed this many characters; short ones stay well below.
pub const LONG_IRI_THRESHOLD: usize = 95;

/// SplitMix64.
#[derive(Debug, Clone)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` by rejection. `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorProfile {
    pub seed: u64,
    pub n_triples: u64,
    pub fraction_external_links: f64,
    pub fraction_literals: f64,
    /// Share of literal triples whose typed literal is malformed.
    pub fraction_malformed_typed_literals: f64,
    pub include_license: bool,
    pub long_uri_fraction: f64,
}

impl Default for GeneratorProfile {
    fn default() -> Self {
        GeneratorProfile {
            seed: 42,
            n_triples: 1000,
            fraction_external_links: 0.2,
            fraction_literals: 0.3,
            fraction_malformed_typed_literals: 0.1,
            include_license: true,
            long_uri_fraction: 0.05,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ProfileError {
    #[error("{0} must lie in [0, 1], got {1}")]
    Fraction(&'static str, f64),
    #[error("license, external links and literals need {needed} triples but only {n} were requested")]
    TooMany { needed: u64, n: u64 },
}

/// Category sizes derived from a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub license: u64,
    pub external_links: u64,
    pub literals: u64,
    pub malformed_literals: u64,
    pub internal_links: u64,
    pub long_iris: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedValues {
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
    #[serde(rename = "RC1")]
    pub rc1: f64,
    #[serde(rename = "SV3")]
    pub sv3: f64,
    #[serde(rename = "CN2")]
    pub cn2: f64,
}

impl ExpectedValues {
    pub fn get(&self, id: &str) -> Option<f64> {
        Some(match id {
            "L1" => self.l1,
            "I2" => self.i2,
            "RC1" => self.rc1,
            "SV3" => self.sv3,
            "CN2" => self.cn2,
            _ => return None,
        })
    }
}

/// Sidecar describing a generated file and the values it was built to have.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorManifest {
    pub profile: GeneratorProfile,
    pub internal_prefix: String,
    pub uri_length_threshold: usize,
    pub counts: CategoryCounts,
    pub expected: ExpectedValues,
}

fn fraction_of(f: f64, n: u64) -> u64 {
    (f * n as f64).round() as u64
}

/// Expected values use the same floating-point operations as the metric
/// formulas so they compare bit-exactly.
fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl GeneratorProfile {
    pub fn validate(&self) -> Result<CategoryCounts, ProfileError> {
        for (name, v) in [
            ("fraction_external_links", self.fraction_external_links),
            ("fraction_literals", self.fraction_literals),
            (
                "fraction_malformed_typed_literals",
                self.fraction_malformed_typed_literals,
            ),
            ("long_uri_fraction", self.long_uri_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ProfileError::Fraction(name, v));
            }
        }
        let n = self.n_triples;
        let license = u64::from(self.include_license);
        let external_links = fraction_of(self.fraction_external_links, n);
        let literals = fraction_of(self.fraction_literals, n);
        let needed = license + external_links + literals;
        if needed > n {
            return Err(ProfileError::TooMany { needed, n });
        }
        Ok(CategoryCounts {
            license,
            external_links,
            literals,
            malformed_literals: fraction_of(self.fraction_malformed_typed_literals, literals),
            internal_links: n - needed,
            long_iris: fraction_of(self.long_uri_fraction, n),
        })
    }

    pub fn manifest(&self) -> Result<GeneratorManifest, ProfileError> {
        let c = self.validate()?;
        let n = self.n_triples;
        let uri_uri = n - c.literals;
        let cn2 = if n == 0 {
            0.0
        } else {
            (n as f64 - uri_uri as f64) / n as f64
        };
        Ok(GeneratorManifest {
            profile: self.clone(),
            internal_prefix: INTERNAL_PREFIX.to_string(),
            uri_length_threshold: LONG_IRI_THRESHOLD,
            counts: c,
            expected: ExpectedValues {
                l1: if c.license > 0 { 1.0 } else { 0.0 },
                i2: ratio(c.external_links, n),
                rc1: ratio(c.long_iris, n),
                sv3: c.malformed_literals as f64,
                cn2,
            },
        })
    }
}

struct Vocab {
    link: Term,
    related: Term,
    value: Term,
    name: Term,
    license: Term,
    license_doc: Term,
}

impl Vocab {
    fn new() -> Vocab {
        let v = |local: &str| Term::iri(format!("{INTERNAL_PREFIX}vocab/{local}")).expect("valid IRI");
        Vocab {
            link: v("linksTo"),
            related: v("related"),
            value: v("value"),
            name: v("name"),
            license: Term::iri(format!("{DCTERMS}license")).expect("valid IRI"),
            license_doc: Term::iri(format!("{INTERNAL_PREFIX}license")).expect("valid IRI"),
        }
    }
}

const VALID_TYPED: [(&str, &str); 6] = [
    ("integer", "42"),
    ("int", "-7"),
    ("decimal", "3.25"),
    ("double", "1.5E3"),
    ("boolean", "true"),
    ("date", "2020-02-29"),
];

const MALFORMED_TYPED: [(&str, &str); 6] = [
    ("integer", "forty-two"),
    ("int", "3000000000"),
    ("decimal", "1.2.3"),
    ("double", "one"),
    ("boolean", "yes"),
    ("date", "2021-02-29"),
];

struct Builder<'v> {
    rng: SplitMix64,
    vocab: &'v Vocab,
    entities: Vec<Term>,
    externals: Vec<Term>,
    datatypes: Vec<(Arc<str>, &'static str, &'static str)>,
    malformed: Vec<(Arc<str>, &'static str)>,
    long_counter: u64,
}

impl Builder<'_> {
    fn pick(&mut self, pool: PoolKind) -> Term {
        let v = match pool {
            PoolKind::Internal => &self.entities,
            PoolKind::External => &self.externals,
        };
        let i = self.rng.below(v.len() as u64) as usize;
        v[i].clone()
    }

    fn long_iri(&mut self) -> Term {
        self.long_counter += 1;
        let tail = "x".repeat(LONG_IRI_THRESHOLD);
        Term::iri(format!("{INTERNAL_PREFIX}resource/{tail}/{}", self.long_counter)).expect("valid IRI")
    }

    fn literal(&mut self, malformed: bool) -> Term {
        if malformed {
            let i = self.rng.below(self.malformed.len() as u64) as usize;
            let (dt, lex) = self.malformed[i].clone();
            return Term::literal_unchecked(lex.into(), dt, None);
        }
        match self.rng.below(4) {
            0 => Term::string(format!("text {}", self.rng.below(1_000_000))),
            1 => Term::literal_unchecked(
                format!("label {}", self.rng.below(1000)).into(),
                RDF_LANG_STRING.into(),
                Some("en".into()),
            ),
            2 => {
                let i = self.rng.below(self.datatypes.len() as u64) as usize;
                let (dt, lex, _) = self.datatypes[i].clone();
                Term::literal_unchecked(lex.into(), dt, None)
            }
            // Datatype without a validator: never counted as malformed.
            _ => Term::literal_unchecked(
                "opaque".into(),
                format!("{INTERNAL_PREFIX}vocab/CustomType").into(),
                None,
            ),
        }
    }
}

#[derive(Clone, Copy)]
enum PoolKind {
    Internal,
    External,
}

/// Replaces the first internal IRI among subject and object with a long one.
fn lengthen(t: Triple, long: Term) -> Triple {
    let internal = |term: &Term| term.as_iri().is_some_and(|i| i.starts_with(INTERNAL_PREFIX));
    let (s, p, o) = (t.subject().clone(), t.predicate().clone(), t.object().clone());
    let t = if internal(&s) {
        Triple::new(long, p, o)
    } else {
        debug_assert!(internal(&o));
        Triple::new(s, p, long)
    };
    t.expect("IRI stays in place of an IRI")
}

/// Triples and manifest for a profile. Same profile, same output.
pub fn generate(profile: &GeneratorProfile) -> Result<(Vec<Triple>, GeneratorManifest), ProfileError> {
    let manifest = profile.manifest()?;
    let c = manifest.counts;
    let n = profile.n_triples as usize;
    let vocab = Vocab::new();
    let pool = (n / 4).max(1);
    let entities = (0..pool)
        .map(|i| Term::iri(format!("{INTERNAL_PREFIX}resource/r{i}")).expect("valid IRI"))
        .collect();
    let externals = (0..(pool / 4).max(1))
        .map(|i| Term::iri(format!("{EXTERNAL_PREFIX}thing/e{i}")).expect("valid IRI"))
        .collect();
    let dt = |local: &str| -> Arc<str> { format!("{XSD}{local}").into() };
    let mut b = Builder {
        rng: SplitMix64::new(profile.seed),
        vocab: &vocab,
        entities,
        externals,
        datatypes: VALID_TYPED.iter().map(|(d, l)| (dt(d), *l, *d)).collect(),
        malformed: MALFORMED_TYPED.iter().map(|(d, l)| (dt(d), *l)).collect(),
        long_counter: 0,
    };

    let mut triples = Vec::with_capacity(n);
    let triple = |s, p: &Term, o| Triple::new(s, p.clone(), o).expect("well-formed by construction");
    if c.license == 1 {
        let s = b.pick(PoolKind::Internal);
        triples.push(triple(s, &b.vocab.license, b.vocab.license_doc.clone()));
    }
    for i in 0..c.external_links {
        let (inside, outside) = (b.pick(PoolKind::Internal), b.pick(PoolKind::External));
        let (s, o) = if i % 2 == 0 {
            (inside, outside)
        } else {
            (outside, inside)
        };
        triples.push(triple(s, &b.vocab.link, o));
    }
    for i in 0..c.literals {
        let s = b.pick(PoolKind::Internal);
        let p = if i % 3 == 0 { &b.vocab.name } else { &b.vocab.value };
        let o = b.literal(i < c.malformed_literals);
        triples.push(triple(s, p, o));
    }
    for i in 0..c.internal_links {
        let (s, o) = (b.pick(PoolKind::Internal), b.pick(PoolKind::Internal));
        let p = if i % 2 == 0 { &b.vocab.link } else { &b.vocab.related };
        triples.push(triple(s, p, o));
    }
    for t in triples.iter_mut().take(c.long_iris as usize) {
        let long = b.long_iri();
        *t = lengthen(t.clone(), long);
    }
    for i in (1..triples.len()).rev() {
        let j = b.rng.below(i as u64 + 1) as usize;
        triples.swap(i, j);
    }
    Ok((triples, manifest))
}

/// N-Triples text for a profile.
pub fn generate_ntriples(profile: &GeneratorProfile) -> Result<(String, GeneratorManifest), ProfileError> {
    let (triples, manifest) = generate(profile)?;
    let mut out = String::with_capacity(triples.len() * 100);
    crate::rdf::ntriples::write_ntriples(&mut out, &triples);
    Ok((out, manifest))
}
