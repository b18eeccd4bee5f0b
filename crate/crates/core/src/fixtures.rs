//! Small reference universe and policies used by the examples, tests and CLI docs.
//!
//! `u0` has two attributes, `region ∈ {NA, EU}` and `qtype ∈ {A, AAAA}`, and two
//! single-record A candidates `a1`, `a2`. Over it:
//!
//! * `p_geo` serves `{a1}` in NA and `{a2}` in EU,
//! * `p_w` serves `{a1}` and `{a2}` with weights 1 : 3 everywhere,
//! * `p_w_prime` does the same with weights 1 : 2.

use std::sync::Arc;

use crate::algebra::{Behavior, Predicate, Term};
use crate::rational::integer;
use crate::universe::{AnswerSet, AttributeSchema, Candidate, Health, Metadata, Record, RrType, Universe};

pub fn universe_with(attributes: &[(&str, &[&str])], candidates: usize) -> Universe {
    let schema = AttributeSchema::new(
        attributes
            .iter()
            .map(|(name, domain)| (name.to_string(), domain.to_vec())),
    )
    .expect("fixture schema");
    let candidates = (0..candidates)
        .map(|i| {
            Candidate::with_rdata(
                format!("a{}", i + 1),
                RrType::A,
                300,
                vec![vec![192, 0, 2, i as u8 + 1]],
            )
            .expect("fixture candidate")
        })
        .collect();
    Universe::new(schema, candidates).expect("fixture universe")
}

pub fn u0() -> Arc<Universe> {
    Arc::new(universe_with(
        &[("region", &["NA", "EU"]), ("qtype", &["A", "AAAA"])],
        2,
    ))
}

/// `u0` with explicit per-candidate health.
pub fn u0_with_health(up: &[bool]) -> Arc<Universe> {
    let base = u0();
    let candidates = base
        .candidates()
        .iter()
        .zip(up)
        .map(|(c, &up)| {
            let metadata = Metadata {
                health: if up { Health::Up } else { Health::Down },
                ..c.metadata().clone()
            };
            Candidate::new(c.id(), c.records().to_vec(), metadata).expect("fixture candidate")
        })
        .collect();
    Arc::new(Universe::new(base.schema().clone(), candidates).expect("fixture universe"))
}

pub fn p_geo_term() -> Term {
    Term::Merge(vec![
        Term::when(Predicate::eq(0, 0), Term::Fixed(AnswerSet::singleton(0))),
        Term::when(Predicate::eq(0, 1), Term::Fixed(AnswerSet::singleton(1))),
    ])
}

pub fn p_geo(universe: &Arc<Universe>) -> Behavior {
    p_geo_term().denote(universe).expect("p_geo over u0")
}

pub fn p_w(universe: &Arc<Universe>) -> Behavior {
    Behavior::weighted(
        universe,
        [
            (AnswerSet::singleton(0), integer(1)),
            (AnswerSet::singleton(1), integer(3)),
        ],
    )
    .expect("p_w over u0")
}

pub fn p_w_prime(universe: &Arc<Universe>) -> Behavior {
    Behavior::weighted(
        universe,
        [
            (AnswerSet::singleton(0), integer(1)),
            (AnswerSet::singleton(1), integer(2)),
        ],
    )
    .expect("p_w_prime over u0")
}

/// One record per candidate, used by wire tests that need many candidates.
pub fn a_record(last_octet: u8) -> Record {
    Record {
        rdata: vec![192, 0, 2, last_octet],
        rrtype: RrType::A,
        ttl: 300,
    }
}
