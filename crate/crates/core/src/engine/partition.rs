use crate::rdf::{Dataset, Triple};

/// Contiguous, balanced slices of a dataset.
#[derive(Debug, Clone)]
pub struct PartitionedDataset<'a> {
    partitions: Vec<&'a [Triple]>,
}

impl<'a> PartitionedDataset<'a> {
    pub fn partitions(&self) -> &[&'a [Triple]] {
        &self.partitions
    }

    pub fn partition_count(&self) -> usize {
        self.partitions.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.partitions.iter().map(|p| p.len()).collect()
    }

    pub fn len(&self) -> usize {
        self.partitions.iter().map(|p| p.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Splits into `p` slices whose sizes differ by at most one, larger first.
/// `p` is capped at the number of triples; an empty dataset gives one empty
/// partition.
///
/// # Panics
/// If `p` is zero.
pub fn partition(d: &Dataset, p: usize) -> PartitionedDataset<'_> {
    partition_slice(&d.triples, p)
}

pub fn partition_slice(triples: &[Triple], p: usize) -> PartitionedDataset<'_> {
    assert!(p >= 1, "partition count must be positive");
    let n = triples.len();
    let p = p.min(n).max(1);
    let (base, extra) = (n / p, n % p);
    let mut partitions = Vec::with_capacity(p);
    let mut start = 0;
    for i in 0..p {
        let len = base + usize::from(i < extra);
        partitions.push(&triples[start..start + len]);
        start += len;
    }
    PartitionedDataset { partitions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Term;
    use proptest::prelude::*;

    fn triples(n: usize) -> Vec<Triple> {
        (0..n)
            .map(|i| {
                Triple::new(
                    Term::iri(format!("http://ex.org/s{i}")).unwrap(),
                    Term::iri("http://ex.org/p").unwrap(),
                    Term::string(i.to_string()),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn examples() {
        let t = triples(10);
        assert_eq!(partition_slice(&t, 3).sizes(), vec![4, 3, 3]);
        let t = triples(5);
        assert_eq!(partition_slice(&t, 1).sizes(), vec![5]);
        assert_eq!(partition_slice(&t, 8).sizes(), vec![1; 5]);
        let empty = partition_slice(&[], 4);
        assert_eq!(empty.sizes(), vec![0]);
        assert!(empty.is_empty());
    }

    proptest! {
        #[test]
        fn concatenation_and_balance(n in 0usize..200, p in 1usize..40) {
            let t = triples(n);
            let pd = partition_slice(&t, p);
            let joined: Vec<Triple> = pd.partitions().iter().flat_map(|s| s.iter().cloned()).collect();
            prop_assert_eq!(&joined, &t);
            prop_assert_eq!(pd.partition_count(), p.min(n).max(1));
            let sizes = pd.sizes();
            let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
            prop_assert!(hi - lo <= 1);
            prop_assert!(sizes.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
