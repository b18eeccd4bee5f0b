//! Seeded random universes, predicates, terms and behaviors.
//!
//! Used by the `check-laws` command and by the property suites. Weights are small
//! exact rationals so that repeated products stay readable in failure reports.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{Behavior, OutcomeRow, Predicate, Term};
use crate::rational::{weight, Weight};
use crate::universe::{AnswerSet, AttributeSchema, Candidate, Health, Metadata, Record, RrType, Universe};

/// Random schema with product size ≤ `max_contexts` and 1..=`max_candidates` candidates.
pub fn random_universe<R: Rng + ?Sized>(rng: &mut R, max_contexts: usize, max_candidates: usize) -> Arc<Universe> {
    let max_contexts = max_contexts.max(1);
    let attribute_count = rng.gen_range(1..=3);
    let mut attributes = Vec::new();
    let mut product = 1usize;
    for a in 0..attribute_count {
        let room = max_contexts / product;
        if room == 0 {
            break;
        }
        let size = rng.gen_range(1..=room.min(4));
        product *= size;
        let domain: Vec<String> = (0..size).map(|v| format!("v{v}")).collect();
        attributes.push((format!("x{a}"), domain));
    }
    let schema = AttributeSchema::new(attributes).expect("generated schema is valid");
    let candidate_count = rng.gen_range(1..=max_candidates.clamp(1, 16));
    let candidates = (0..candidate_count)
        .map(|i| {
            let metadata = Metadata {
                weight: weight(rng.gen_range(0..4), 1),
                priority: rng.gen_range(0..3),
                tag: None,
                health: if rng.gen_bool(0.8) { Health::Up } else { Health::Down },
            };
            let records = (0..rng.gen_range(1..=3))
                .map(|r| Record {
                    rdata: vec![10, i as u8, r as u8, 1],
                    rrtype: RrType::A,
                    ttl: 60,
                })
                .collect();
            Candidate::new(format!("c{i}"), records, metadata).expect("generated candidate is valid")
        })
        .collect();
    let limits = crate::universe::Limits {
        max_contexts,
        max_candidates: candidate_count.max(crate::universe::DEFAULT_MAX_CANDIDATES),
    };
    Arc::new(Universe::with_limits(schema, candidates, limits).expect("generated universe is valid"))
}

pub fn random_weight<R: Rng + ?Sized>(rng: &mut R) -> Weight {
    weight(rng.gen_range(1..=6), rng.gen_range(1..=4))
}

pub fn random_answer_set<R: Rng + ?Sized>(rng: &mut R, universe: &Universe) -> AnswerSet {
    AnswerSet::from_bits(rng.gen_range(0..=universe.full_answer_set().bits()))
}

pub fn random_row<R: Rng + ?Sized>(rng: &mut R, universe: &Universe) -> OutcomeRow {
    if rng.gen_bool(0.2) {
        return OutcomeRow::zero();
    }
    let entries: Vec<(AnswerSet, Weight)> = (0..rng.gen_range(1..=3))
        .map(|_| (random_answer_set(rng, universe), random_weight(rng)))
        .collect();
    OutcomeRow::from_weights(entries).expect("positive weights")
}

/// Mixes three shapes: independent rows per context, a few rows shared across
/// contexts (so normal forms have nontrivial regions), and random terms.
pub fn random_behavior<R: Rng + ?Sized>(rng: &mut R, universe: &Arc<Universe>) -> Behavior {
    match rng.gen_range(0..3) {
        0 => Behavior::from_fn(universe, |_, _| random_row(rng, universe)),
        1 => {
            let palette: Vec<OutcomeRow> = (0..rng.gen_range(1..=3)).map(|_| random_row(rng, universe)).collect();
            Behavior::from_fn(universe, |_, _| palette.choose(rng).expect("nonempty palette").clone())
        }
        _ => random_term(rng, universe, 3)
            .denote(universe)
            .expect("generated term is valid"),
    }
}

pub fn random_predicate<R: Rng + ?Sized>(rng: &mut R, universe: &Universe, depth: usize) -> Predicate {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => Predicate::True,
            1 => Predicate::False,
            _ => {
                let attribute = rng.gen_range(0..universe.schema().len());
                let size = universe.schema().attributes()[attribute].domain.len();
                let values: BTreeSet<usize> = (0..rng.gen_range(1..=size)).map(|_| rng.gen_range(0..size)).collect();
                Predicate::Test { attribute, values }
            }
        };
    }
    match rng.gen_range(0..3) {
        0 => random_predicate(rng, universe, depth - 1).and(random_predicate(rng, universe, depth - 1)),
        1 => random_predicate(rng, universe, depth - 1).or(random_predicate(rng, universe, depth - 1)),
        _ => random_predicate(rng, universe, depth - 1).not(),
    }
}

/// Random policy term; `product` nodes are included.
pub fn random_term<R: Rng + ?Sized>(rng: &mut R, universe: &Universe, depth: usize) -> Term {
    let n = universe.candidates().len();
    let leaf = depth == 0 || rng.gen_bool(0.35);
    if leaf {
        return match rng.gen_range(0..7) {
            0 => Term::Zero,
            1 => Term::One,
            2 => Term::Fixed(random_answer_set(rng, universe)),
            3 => Term::Weighted(
                (0..rng.gen_range(1..=3))
                    .map(|_| (random_answer_set(rng, universe), random_weight(rng)))
                    .collect(),
            ),
            4 => {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(rng);
                order.truncate(rng.gen_range(1..=n));
                Term::Priority(order)
            }
            5 => Term::Affinity(rng.gen_range(0..universe.schema().len())),
            _ => Term::Fixed(AnswerSet::singleton(rng.gen_range(0..n))),
        };
    }
    match rng.gen_range(0..3) {
        0 => Term::when(
            random_predicate(rng, universe, 2),
            random_term(rng, universe, depth - 1),
        ),
        1 => Term::Merge(
            (0..rng.gen_range(1..=3))
                .map(|_| random_term(rng, universe, depth - 1))
                .collect(),
        ),
        _ => Term::product(
            random_term(rng, universe, depth - 1),
            random_term(rng, universe, depth - 1),
        ),
    }
}
