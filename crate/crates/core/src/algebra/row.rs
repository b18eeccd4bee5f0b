use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::rational::{ensure_nonnegative, Weight};
use crate::universe::{AnswerSet, Universe};

/// Unnormalized weights over answer sets at one context.
///
/// Only strictly positive weights are stored, so two rows are equal exactly when
/// they assign the same weight to every subset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeRow {
    weights: BTreeMap<AnswerSet, Weight>,
}

impl OutcomeRow {
    pub fn zero() -> Self {
        OutcomeRow::default()
    }

    /// Weight 1 on every subset of the candidate set.
    pub fn full(universe: &Universe) -> Self {
        OutcomeRow {
            weights: universe.subsets().into_iter().map(|s| (s, Weight::one())).collect(),
        }
    }

    pub fn point(set: AnswerSet) -> Self {
        OutcomeRow {
            weights: BTreeMap::from([(set, Weight::one())]),
        }
    }

    /// Sums duplicate entries and drops zeros; negative weights are rejected.
    pub fn from_weights<I: IntoIterator<Item = (AnswerSet, Weight)>>(entries: I) -> Result<Self> {
        let mut weights: BTreeMap<AnswerSet, Weight> = BTreeMap::new();
        for (set, w) in entries {
            ensure_nonnegative(&w)?;
            *weights.entry(set).or_insert_with(Weight::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        Ok(OutcomeRow { weights })
    }

    pub(crate) fn from_positive(weights: BTreeMap<AnswerSet, Weight>) -> Self {
        debug_assert!(weights.values().all(|w| *w > Weight::zero()));
        OutcomeRow { weights }
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, set: AnswerSet) -> Weight {
        self.weights.get(&set).cloned().unwrap_or_else(Weight::zero)
    }

    pub fn weights(&self) -> &BTreeMap<AnswerSet, Weight> {
        &self.weights
    }

    pub fn support(&self) -> impl Iterator<Item = AnswerSet> + '_ {
        self.weights.keys().copied()
    }

    pub fn total(&self) -> Weight {
        self.weights.values().fold(Weight::zero(), |acc, w| acc + w)
    }

    pub fn add(&self, other: &OutcomeRow) -> OutcomeRow {
        let mut weights = self.weights.clone();
        for (set, w) in &other.weights {
            *weights.entry(*set).or_insert_with(Weight::zero) += w;
        }
        OutcomeRow { weights }
    }

    /// Per-subset product; the support is the intersection of supports.
    pub fn mul(&self, other: &OutcomeRow) -> OutcomeRow {
        let (small, large) = if self.weights.len() <= other.weights.len() {
            (self, other)
        } else {
            (other, self)
        };
        let weights = small
            .weights
            .iter()
            .filter_map(|(set, w)| large.weights.get(set).map(|v| (*set, w * v)))
            .collect();
        OutcomeRow { weights }
    }

    pub fn scale(&self, factor: &Weight) -> OutcomeRow {
        if factor.is_zero() {
            return OutcomeRow::zero();
        }
        OutcomeRow {
            weights: self.weights.iter().map(|(s, w)| (*s, w * factor)).collect(),
        }
    }
}
