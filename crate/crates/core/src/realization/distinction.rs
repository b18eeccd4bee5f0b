use std::collections::BTreeSet;

use crate::algebra::{Behavior, ObservableRow};
use crate::error::{Error, Result};

/// Unordered pairs of distinct context positions, stored as `(low, high)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DistinctionSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl DistinctionSet {
    pub fn new() -> Self {
        DistinctionSet::default()
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        assert_ne!(a, b, "a distinction needs two different contexts");
        self.pairs.insert((a.min(b), a.max(b)));
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a.min(b), a.max(b)))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_subset(&self, other: &DistinctionSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }
}

impl FromIterator<(usize, usize)> for DistinctionSet {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        let mut set = DistinctionSet::new();
        for (a, b) in iter {
            set.insert(a, b);
        }
        set
    }
}

fn differing_pairs(rows: &[ObservableRow]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..rows.len()).flat_map(move |i| {
        ((i + 1)..rows.len())
            .filter(move |&j| rows[i] != rows[j])
            .map(move |j| (i, j))
    })
}

/// Context pairs that `f` serves observably differently.
pub fn distinctions(f: &Behavior) -> DistinctionSet {
    let obs = f.observable();
    differing_pairs(obs.rows()).collect()
}

/// The distinctions of `f` that `g` also keeps.
pub fn preserved(f: &Behavior, g: &Behavior) -> Result<DistinctionSet> {
    if **f.universe() != **g.universe() {
        return Err(Error::UniverseMismatch);
    }
    let (of, og) = (f.observable(), g.observable());
    Ok(differing_pairs(of.rows())
        .filter(|&(i, j)| og.at(i) != og.at(j))
        .collect())
}
