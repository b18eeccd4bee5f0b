use std::sync::Arc;

use super::behavior::{affinity_row, priority_row, Behavior};
use super::predicate::Predicate;
use super::row::OutcomeRow;
use crate::error::{Error, Result};
use crate::rational::Weight;
use crate::universe::{AnswerSet, Universe};

/// A policy expression with names resolved against a universe.
///
/// Evaluation at a single context walks the tree once, so the number of steps is
/// bounded by [`Term::step_bound`] regardless of the context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    Fixed(AnswerSet),
    Weighted(Vec<(AnswerSet, Weight)>),
    Priority(Vec<usize>),
    Affinity(usize),
    /// `gate(predicate) ⊗ body`
    When(Predicate, Box<Term>),
    /// `⊕` over the operands; the empty merge is `zero`.
    Merge(Vec<Term>),
    /// General pointwise `⊗`.
    Product(Box<Term>, Box<Term>),
}

impl Term {
    pub fn when(predicate: Predicate, body: Term) -> Self {
        Term::When(predicate, Box::new(body))
    }

    pub fn product(left: Term, right: Term) -> Self {
        Term::Product(Box::new(left), Box::new(right))
    }

    pub fn step_bound(&self) -> usize {
        match self {
            Term::Zero | Term::One | Term::Fixed(_) | Term::Weighted(_) | Term::Priority(_) | Term::Affinity(_) => 1,
            Term::When(p, body) => 1 + p.node_count() + body.step_bound(),
            Term::Merge(items) => 1 + items.iter().map(Term::step_bound).sum::<usize>(),
            Term::Product(l, r) => 1 + l.step_bound() + r.step_bound(),
        }
    }

    /// Evaluates at one context, counting visited nodes.
    pub fn evaluate_at(&self, universe: &Universe, context_index: usize, steps: &mut usize) -> OutcomeRow {
        let context = universe.context_at(context_index);
        self.eval(universe, &context, steps)
    }

    fn eval(&self, u: &Universe, c: &crate::universe::QueryContext, steps: &mut usize) -> OutcomeRow {
        *steps += 1;
        match self {
            Term::Zero => OutcomeRow::zero(),
            Term::One => OutcomeRow::full(u),
            Term::Fixed(s) => OutcomeRow::point(*s),
            Term::Weighted(entries) => {
                OutcomeRow::from_weights(entries.iter().cloned()).expect("weights validated at construction")
            }
            Term::Priority(order) => priority_row(u, order).expect("order validated at construction"),
            Term::Affinity(a) => affinity_row(u, *a, c),
            Term::When(p, body) => {
                if p.holds_counted(c, steps) {
                    body.eval(u, c, steps)
                } else {
                    OutcomeRow::zero()
                }
            }
            Term::Merge(items) => items
                .iter()
                .fold(OutcomeRow::zero(), |acc, t| acc.add(&t.eval(u, c, steps))),
            Term::Product(l, r) => {
                let left = l.eval(u, c, steps);
                left.mul(&r.eval(u, c, steps))
            }
        }
    }

    /// Checks that every position the term references exists in the universe.
    pub fn validate(&self, universe: &Universe) -> Result<()> {
        let full = universe.full_answer_set().bits();
        let set_ok = |s: &AnswerSet| {
            if s.bits() & !full == 0 {
                Ok(())
            } else {
                Err(Error::UnknownCandidate(format!("position mask {:#x}", s.bits())))
            }
        };
        match self {
            Term::Zero | Term::One => Ok(()),
            Term::Fixed(s) => set_ok(s),
            Term::Weighted(entries) => {
                for (s, w) in entries {
                    set_ok(s)?;
                    crate::rational::ensure_nonnegative(w)?;
                }
                Ok(())
            }
            Term::Priority(order) => priority_row(universe, order).map(|_| ()),
            Term::Affinity(a) => {
                if *a < universe.schema().len() {
                    Ok(())
                } else {
                    Err(Error::UnknownAttribute(format!("#{a}")))
                }
            }
            Term::When(p, body) => {
                if !p.fits(universe) {
                    return Err(Error::Semantic("predicate does not fit the universe schema".into()));
                }
                body.validate(universe)
            }
            Term::Merge(items) => items.iter().try_for_each(|t| t.validate(universe)),
            Term::Product(l, r) => {
                l.validate(universe)?;
                r.validate(universe)
            }
        }
    }

    /// Builds the behavior compositionally from the algebra's constructors and operations.
    pub fn denote(&self, universe: &Arc<Universe>) -> Result<Behavior> {
        match self {
            Term::Zero => Ok(Behavior::zero(universe)),
            Term::One => Ok(Behavior::one(universe)),
            Term::Fixed(s) => Behavior::fixed(universe, *s),
            Term::Weighted(entries) => Behavior::weighted(universe, entries.iter().cloned()),
            Term::Priority(order) => Behavior::priority(universe, order),
            Term::Affinity(a) => Behavior::affinity(universe, *a),
            Term::When(p, body) => Behavior::gate(universe, p)?.mul(&body.denote(universe)?),
            Term::Merge(items) => items
                .iter()
                .try_fold(Behavior::zero(universe), |acc, t| acc.add(&t.denote(universe)?)),
            Term::Product(l, r) => l.denote(universe)?.mul(&r.denote(universe)?),
        }
    }

    pub fn uses_product(&self) -> bool {
        match self {
            Term::Product(..) => true,
            Term::When(_, body) => body.uses_product(),
            Term::Merge(items) => items.iter().any(Term::uses_product),
            _ => false,
        }
    }
}

/// Per-context evaluation result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub row: OutcomeRow,
    pub steps: usize,
}

/// Anything that can produce a context's outcome row within a fixed step bound.
pub trait Evaluate {
    fn universe(&self) -> &Arc<Universe>;
    fn evaluate(&self, context_index: usize) -> Evaluation;
    /// Upper bound on `Evaluation::steps` over every context.
    fn step_bound(&self) -> usize;
}

impl Evaluate for Behavior {
    fn universe(&self) -> &Arc<Universe> {
        Behavior::universe(self)
    }

    fn evaluate(&self, context_index: usize) -> Evaluation {
        Evaluation {
            row: self.row(context_index).clone(),
            steps: 1,
        }
    }

    fn step_bound(&self) -> usize {
        1
    }
}

/// A term bound to the universe it was resolved against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Policy {
    universe: Arc<Universe>,
    term: Term,
}

impl Policy {
    pub fn new(universe: Arc<Universe>, term: Term) -> Result<Self> {
        term.validate(&universe)?;
        Ok(Policy { universe, term })
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    /// Dense behavior by walking the tree at every context.
    pub fn to_behavior(&self) -> Behavior {
        Behavior::from_fn(&self.universe, |i, _| self.evaluate(i).row)
    }
}

impl Evaluate for Policy {
    fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    fn evaluate(&self, context_index: usize) -> Evaluation {
        let mut steps = 0;
        let row = self.term.evaluate_at(&self.universe, context_index, &mut steps);
        Evaluation { row, steps }
    }

    fn step_bound(&self) -> usize {
        self.term.step_bound()
    }
}
