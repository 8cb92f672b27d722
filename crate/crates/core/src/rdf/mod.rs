//! RDF terms, triples and N-Triples I/O.

mod dataset;
pub mod ntriples;
mod term;
pub mod vocab;

pub use dataset::{load_path, parse_bytes, parse_dataset, Dataset, ErrorPolicy, LoadError, ParseReport};
pub use ntriples::{
    parse_ntriples_bytes, parse_ntriples_line, serialize_triple, write_ntriples, LineParser, ParseError, ParseErrorKind,
};
pub use term::{Literal, Position, Term, TermError, Triple};
