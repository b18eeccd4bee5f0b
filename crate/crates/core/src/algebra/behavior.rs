use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::observable::{Observable, ObservableRow};
use super::predicate::Predicate;
use super::row::OutcomeRow;
use crate::error::{Error, Result};
use crate::rational::Weight;
use crate::universe::{AnswerSet, QueryContext, Universe};

/// A total map from contexts to outcome rows: one element of the semantic domain.
///
/// Rows are stored densely in context enumeration order. Values are immutable;
/// every operation returns a new behavior.
#[derive(Debug, Clone)]
pub struct Behavior {
    universe: Arc<Universe>,
    rows: Vec<OutcomeRow>,
}

impl PartialEq for Behavior {
    fn eq(&self, other: &Self) -> bool {
        same_universe(&self.universe, &other.universe) && self.rows == other.rows
    }
}

impl Eq for Behavior {}

impl Hash for Behavior {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
    }
}

fn same_universe(a: &Arc<Universe>, b: &Arc<Universe>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Outcome of an observational equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Distinguished(Witness),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// A context where two behaviors are observably different.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub context_index: usize,
    pub context: QueryContext,
    pub left: ObservableRow,
    pub right: ObservableRow,
}

/// FNV-1a, used for affinity so the mapping is stable across builds and platforms.
fn mix(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ u64::from(*b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

impl Behavior {
    pub fn from_rows(universe: Arc<Universe>, rows: Vec<OutcomeRow>) -> Result<Self> {
        if rows.len() != universe.context_count() {
            return Err(Error::ContextOutsideUniverse);
        }
        let full = universe.full_answer_set().bits();
        if rows.iter().flat_map(|r| r.support()).any(|s| s.bits() & !full != 0) {
            return Err(Error::UnknownCandidate("answer set outside the candidate list".into()));
        }
        Ok(Behavior { universe, rows })
    }

    pub fn from_fn<F>(universe: &Arc<Universe>, mut row_at: F) -> Self
    where
        F: FnMut(usize, &QueryContext) -> OutcomeRow,
    {
        let rows = (0..universe.context_count())
            .map(|i| row_at(i, &universe.context_at(i)))
            .collect();
        Behavior {
            universe: universe.clone(),
            rows,
        }
    }

    fn constant(universe: &Arc<Universe>, row: OutcomeRow) -> Self {
        Behavior {
            universe: universe.clone(),
            rows: vec![row; universe.context_count()],
        }
    }

    /// The additive identity: empty everywhere.
    pub fn zero(universe: &Arc<Universe>) -> Self {
        Self::constant(universe, OutcomeRow::zero())
    }

    /// The multiplicative identity: weight 1 on every subset at every context.
    pub fn one(universe: &Arc<Universe>) -> Self {
        Self::constant(universe, OutcomeRow::full(universe))
    }

    /// Pass-through where the predicate holds, empty elsewhere.
    pub fn gate(universe: &Arc<Universe>, predicate: &Predicate) -> Result<Self> {
        if !predicate.fits(universe) {
            return Err(Error::Semantic("predicate does not fit the universe schema".into()));
        }
        let full = OutcomeRow::full(universe);
        Ok(Self::from_fn(universe, |_, c| {
            if predicate.holds(c) {
                full.clone()
            } else {
                OutcomeRow::zero()
            }
        }))
    }

    /// Serves `set` with certainty at every context.
    pub fn fixed(universe: &Arc<Universe>, set: AnswerSet) -> Result<Self> {
        Self::check_set(universe, set)?;
        Ok(Self::constant(universe, OutcomeRow::point(set)))
    }

    pub fn weighted<I>(universe: &Arc<Universe>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (AnswerSet, Weight)>,
    {
        let entries: Vec<(AnswerSet, Weight)> = entries.into_iter().collect();
        for (set, _) in &entries {
            Self::check_set(universe, *set)?;
        }
        Ok(Self::constant(universe, OutcomeRow::from_weights(entries)?))
    }

    /// The first healthy candidate in `order`, or empty when none is healthy.
    pub fn priority(universe: &Arc<Universe>, order: &[usize]) -> Result<Self> {
        Ok(Self::constant(universe, priority_row(universe, order)?))
    }

    /// A deterministic per-context choice among healthy candidates, keyed only on
    /// the value of `attribute`.
    pub fn affinity(universe: &Arc<Universe>, attribute: usize) -> Result<Self> {
        if attribute >= universe.schema().len() {
            return Err(Error::UnknownAttribute(format!("#{attribute}")));
        }
        Ok(Self::from_fn(universe, |_, c| affinity_row(universe, attribute, c)))
    }

    fn check_set(universe: &Universe, set: AnswerSet) -> Result<()> {
        if set.bits() & !universe.full_answer_set().bits() != 0 {
            Err(Error::UnknownCandidate(format!("position mask {:#x}", set.bits())))
        } else {
            Ok(())
        }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn rows(&self) -> &[OutcomeRow] {
        &self.rows
    }

    pub fn row(&self, context_index: usize) -> &OutcomeRow {
        &self.rows[context_index]
    }

    pub fn row_for(&self, context: &QueryContext) -> Result<&OutcomeRow> {
        Ok(&self.rows[self.universe.context_index(context)?])
    }

    fn zip_with<F>(&self, other: &Behavior, op: F) -> Result<Behavior>
    where
        F: Fn(&OutcomeRow, &OutcomeRow) -> OutcomeRow,
    {
        if !same_universe(&self.universe, &other.universe) {
            return Err(Error::UniverseMismatch);
        }
        Ok(Behavior {
            universe: self.universe.clone(),
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| op(a, b)).collect(),
        })
    }

    /// `⊕`: pointwise, per-subset weight addition.
    pub fn add(&self, other: &Behavior) -> Result<Behavior> {
        self.zip_with(other, OutcomeRow::add)
    }

    /// `⊗`: pointwise, per-subset weight product.
    pub fn mul(&self, other: &Behavior) -> Result<Behavior> {
        self.zip_with(other, OutcomeRow::mul)
    }

    pub fn observable(&self) -> Observable {
        Observable::new(self.rows.iter().map(ObservableRow::of).collect())
    }

    pub fn observable_at(&self, context_index: usize) -> ObservableRow {
        ObservableRow::of(&self.rows[context_index])
    }

    /// Observational equivalence, with the first distinguishing context on failure.
    pub fn equiv(&self, other: &Behavior) -> Result<Equivalence> {
        if !same_universe(&self.universe, &other.universe) {
            return Err(Error::UniverseMismatch);
        }
        for (i, (a, b)) in self.rows.iter().zip(&other.rows).enumerate() {
            let (left, right) = (ObservableRow::of(a), ObservableRow::of(b));
            if left != right {
                return Ok(Equivalence::Distinguished(Witness {
                    context_index: i,
                    context: self.universe.context_at(i),
                    left,
                    right,
                }));
            }
        }
        Ok(Equivalence::Equivalent)
    }
}

pub(crate) fn priority_row(universe: &Universe, order: &[usize]) -> Result<OutcomeRow> {
    if let Some(&bad) = order.iter().find(|&&i| i >= universe.candidates().len()) {
        return Err(Error::UnknownCandidate(format!("#{bad}")));
    }
    Ok(order
        .iter()
        .find(|&&i| universe.candidates()[i].is_healthy())
        .map(|&i| OutcomeRow::point(AnswerSet::singleton(i)))
        .unwrap_or_default())
}

pub(crate) fn affinity_row(universe: &Universe, attribute: usize, context: &QueryContext) -> OutcomeRow {
    let healthy: Vec<usize> = universe
        .candidates()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_healthy())
        .map(|(i, _)| i)
        .collect();
    if healthy.is_empty() {
        return OutcomeRow::zero();
    }
    let attr = &universe.schema().attributes()[attribute];
    let key = format!("{}={}", attr.name, attr.domain[context.value(attribute)]);
    let pick = healthy[(mix(key.as_bytes()) % healthy.len() as u64) as usize];
    OutcomeRow::point(AnswerSet::singleton(pick))
}
