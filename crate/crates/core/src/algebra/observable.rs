use std::collections::BTreeMap;

use num_traits::Zero;

use super::row::OutcomeRow;
use crate::rational::Weight;
use crate::universe::{AnswerSet, Universe};

/// What a resolver can see at one context: nothing, or a probability
/// distribution over answer sets whose weights sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObservableRow {
    Empty,
    Distribution(BTreeMap<AnswerSet, Weight>),
}

impl ObservableRow {
    pub fn of(row: &OutcomeRow) -> Self {
        if row.is_zero() {
            return ObservableRow::Empty;
        }
        let total = row.total();
        ObservableRow::Distribution(row.weights().iter().map(|(s, w)| (*s, w / &total)).collect())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ObservableRow::Empty)
    }

    pub fn probability(&self, set: AnswerSet) -> Weight {
        match self {
            ObservableRow::Empty => Weight::zero(),
            ObservableRow::Distribution(d) => d.get(&set).cloned().unwrap_or_else(Weight::zero),
        }
    }

    pub fn support(&self) -> Vec<AnswerSet> {
        match self {
            ObservableRow::Empty => Vec::new(),
            ObservableRow::Distribution(d) => d.keys().copied().collect(),
        }
    }

    /// The normalized row as raw weights; `Empty` becomes the zero row.
    pub fn to_row(&self) -> OutcomeRow {
        match self {
            ObservableRow::Empty => OutcomeRow::zero(),
            ObservableRow::Distribution(d) => OutcomeRow::from_positive(d.clone()),
        }
    }

    pub fn format(&self, universe: &Universe) -> String {
        match self {
            ObservableRow::Empty => "empty".to_string(),
            ObservableRow::Distribution(d) => {
                let entries: Vec<String> = d
                    .iter()
                    .map(|(s, w)| {
                        format!(
                            "{}: {}",
                            universe.format_answer_set(*s),
                            crate::rational::format_weight(w)
                        )
                    })
                    .collect();
                format!("{{ {} }}", entries.join(", "))
            }
        }
    }
}

/// The resolver-visible quotient of a behavior, one row per context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Observable {
    rows: Vec<ObservableRow>,
}

impl Observable {
    pub(crate) fn new(rows: Vec<ObservableRow>) -> Self {
        Observable { rows }
    }

    pub fn rows(&self) -> &[ObservableRow] {
        &self.rows
    }

    pub fn at(&self, context_index: usize) -> &ObservableRow {
        &self.rows[context_index]
    }
}
