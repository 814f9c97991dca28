//! Finite sample spaces and σ-algebras represented by their atom partitions.
//!
//! On a finite space every σ-algebra is generated by a partition; an event is
//! measurable iff it is a union of partition blocks (atoms). Atoms are kept in
//! canonical order (sorted members, blocks ordered by smallest member), so all
//! matrix indexing and witness reporting downstream is deterministic.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// An ordered set of distinct point labels. The ordering is fixed at
/// construction and used for all vector and matrix indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
}

impl FiniteSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvariantViolation(
                "space must have at least one point".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label.clone()) {
                return Err(Error::InvariantViolation(format!(
                    "duplicate point label {label:?}"
                )));
            }
        }
        Ok(Self { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A σ-algebra on a [`FiniteSpace`], stored as its atom partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaAlgebra {
    space: FiniteSpace,
    blocks: Vec<Vec<usize>>,
    atom_of: Vec<usize>,
}

impl SigmaAlgebra {
    /// Builds a σ-algebra from partition blocks of point indices. Blocks are
    /// canonicalized: members sorted, blocks ordered by smallest member.
    pub fn new(space: FiniteSpace, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = space.len();
        let mut canonical: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::InvariantViolation("empty partition block".into()));
            }
            let set: BTreeSet<usize> = block.iter().copied().collect();
            if set.len() != block.len() {
                return Err(Error::InvariantViolation(
                    "repeated point inside a block".into(),
                ));
            }
            canonical.push(set.into_iter().collect());
        }
        canonical.sort_by_key(|b| b[0]);
        let mut atom_of = vec![usize::MAX; n];
        for (a, block) in canonical.iter().enumerate() {
            for &p in block {
                if p >= n {
                    return Err(Error::IndexOutOfRange { index: p, len: n });
                }
                if atom_of[p] != usize::MAX {
                    return Err(Error::InvariantViolation(format!(
                        "point {:?} appears in two blocks",
                        space.label(p)
                    )));
                }
                atom_of[p] = a;
            }
        }
        if let Some(p) = atom_of.iter().position(|&a| a == usize::MAX) {
            return Err(Error::InvariantViolation(format!(
                "point {:?} not covered by the partition",
                space.label(p)
            )));
        }
        Ok(Self {
            space,
            blocks: canonical,
            atom_of,
        })
    }

    /// The finest σ-algebra: every point is an atom.
    pub fn power_set(space: FiniteSpace) -> Self {
        let blocks = (0..space.len()).map(|i| vec![i]).collect();
        Self::new(space, blocks).expect("singleton partition is valid")
    }

    /// The coarsest σ-algebra: one atom containing every point.
    pub fn trivial(space: FiniteSpace) -> Self {
        let blocks = vec![(0..space.len()).collect()];
        Self::new(space, blocks).expect("single-block partition is valid")
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    /// Partition blocks in canonical (smallest-member-first) order.
    pub fn atoms(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn atom_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn atom(&self, index: usize) -> &[usize] {
        &self.blocks[index]
    }

    /// Index of the atom containing a point.
    pub fn atom_of(&self, point: usize) -> usize {
        self.atom_of[point]
    }

    /// Human-readable atom rendering, e.g. `{01,10}`.
    pub fn atom_label(&self, index: usize) -> String {
        let parts: Vec<&str> = self.blocks[index]
            .iter()
            .map(|&p| self.space.label(p))
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    /// An event is measurable iff it is a union of atoms.
    pub fn is_event_measurable(&self, event: &BTreeSet<usize>) -> bool {
        if event.iter().any(|&p| p >= self.space.len()) {
            return false;
        }
        self.blocks.iter().all(|block| {
            let hit = block.iter().filter(|p| event.contains(p)).count();
            hit == 0 || hit == block.len()
        })
    }

    /// True iff every atom of `self` is a union of atoms of `finer`.
    pub fn is_coarsening_of(&self, finer: &SigmaAlgebra) -> bool {
        if self.space != finer.space {
            return false;
        }
        self.blocks.iter().all(|block| {
            let set: BTreeSet<usize> = block.iter().copied().collect();
            finer.is_event_measurable(&set)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(labels: &[&str]) -> FiniteSpace {
        FiniteSpace::new(labels.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_duplicate_labels() {
        assert!(FiniteSpace::new(["a", "a"]).is_err());
        assert!(FiniteSpace::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn power_set_atoms_are_singletons() {
        let sigma = SigmaAlgebra::power_set(space(&["a", "b"]));
        assert_eq!(sigma.atoms(), &[vec![0], vec![1]]);
    }

    #[test]
    fn trivial_algebra_has_one_atom() {
        let sigma = SigmaAlgebra::trivial(space(&["a", "b", "c"]));
        assert_eq!(sigma.atoms(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn atoms_echo_partition_in_canonical_order() {
        let sigma = SigmaAlgebra::new(space(&["a", "b", "c"]), vec![vec![2], vec![1, 0]]).unwrap();
        assert_eq!(sigma.atoms(), &[vec![0, 1], vec![2]]);
        assert_eq!(sigma.atom_of(1), 0);
        assert_eq!(sigma.atom_label(0), "{a,b}");
    }

    #[test]
    fn rejects_non_partitions() {
        let s = space(&["a", "b", "c"]);
        assert!(SigmaAlgebra::new(s.clone(), vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(SigmaAlgebra::new(s.clone(), vec![vec![0, 1]]).is_err());
        assert!(SigmaAlgebra::new(s, vec![vec![0], vec![1], vec![2], vec![3]]).is_err());
    }

    #[test]
    fn measurability_and_coarsening() {
        let s = space(&["a", "b", "c"]);
        let coarse = SigmaAlgebra::new(s.clone(), vec![vec![0, 1], vec![2]]).unwrap();
        let fine = SigmaAlgebra::power_set(s);
        assert!(coarse.is_event_measurable(&BTreeSet::from([0, 1])));
        assert!(!coarse.is_event_measurable(&BTreeSet::from([0])));
        assert!(coarse.is_coarsening_of(&fine));
        assert!(!fine.is_coarsening_of(&coarse));
    }
}
