//! Shared fixtures for the criterion benches.

use distqa_core::benchmark::bench_profile;
use distqa_core::generator::generate_ntriples;
use distqa_core::rdf::parse_bytes;
use distqa_core::{Dataset, ErrorPolicy};

pub const SEED: u64 = 42;

/// Generated N-Triples text of `n` triples.
pub fn ntriples(n: usize) -> String {
    generate_ntriples(&bench_profile(n, SEED))
        .expect("bench profile is valid")
        .0
}

pub fn dataset(n: usize) -> Dataset {
    parse_bytes(ntriples(n).as_bytes(), "bench", ErrorPolicy::Strict, 1).expect("generated text parses")
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixture_has_requested_size() {
        assert_eq!(super::dataset(250).len(), 250);
    }
}
