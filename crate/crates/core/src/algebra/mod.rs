//! Behaviors and their semiring structure.
//!
//! The raw carrier is an unnormalized nonnegative-rational weight per answer set per
//! context ([`OutcomeRow`]), so `⊕` (pointwise sum) and `⊗` (pointwise product) are
//! total and the semiring laws hold as exact equalities. What a resolver sees is the
//! normalized quotient, [`Observable`]; [`Behavior::equiv`] compares behaviors there.

mod behavior;
mod observable;
mod predicate;
mod row;
mod term;

use std::fmt;
use std::str::FromStr;

pub use behavior::{Behavior, Equivalence, Witness};
pub use observable::{Observable, ObservableRow};
pub use predicate::Predicate;
pub use row::OutcomeRow;
pub use term::{Evaluate, Evaluation, Policy, Term};

/// The selection primitives a realization may or may not offer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SelectionKind {
    Fixed,
    Weighted,
    Priority,
    Affinity,
}

impl SelectionKind {
    pub const ALL: [SelectionKind; 4] = [
        SelectionKind::Fixed,
        SelectionKind::Weighted,
        SelectionKind::Priority,
        SelectionKind::Affinity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SelectionKind::Fixed => "fixed",
            SelectionKind::Weighted => "weighted",
            SelectionKind::Priority => "priority",
            SelectionKind::Affinity => "affinity",
        }
    }
}

impl fmt::Display for SelectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SelectionKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SelectionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| crate::Error::InvalidProfile(format!("unknown selection `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fixtures::{p_geo, p_w, u0};
    use crate::rational::{integer, weight};
    use crate::universe::AnswerSet;
    use crate::Error;

    fn a(i: usize) -> AnswerSet {
        AnswerSet::singleton(i)
    }

    #[test]
    fn zero_is_additive_identity() {
        let u = u0();
        let f = p_geo(&u);
        assert_eq!(f.add(&Behavior::zero(&u)).unwrap(), f);
        assert_eq!(Behavior::one(&u).add(&Behavior::zero(&u)).unwrap(), Behavior::one(&u));
    }

    #[test]
    fn add_commutes_on_fixture_policies() {
        let u = u0();
        let (g, w) = (p_geo(&u), p_w(&u));
        let (gw, wg) = (g.add(&w).unwrap(), w.add(&g).unwrap());
        for i in 0..u.context_count() {
            assert_eq!(gw.row(i), wg.row(i));
        }
    }

    #[test]
    fn add_sums_weights() {
        let u = u0();
        let x = Behavior::weighted(&u, [(a(0), integer(1))]).unwrap();
        let y = Behavior::weighted(&u, [(a(0), integer(3))]).unwrap();
        let sum = x.add(&y).unwrap();
        for row in sum.rows() {
            assert_eq!(row.weights().len(), 1);
            assert_eq!(row.get(a(0)), integer(4));
        }
    }

    #[test]
    fn one_and_zero_under_mul() {
        let u = u0();
        let f = p_w(&u);
        assert_eq!(Behavior::one(&u).mul(&f).unwrap(), f);
        assert_eq!(Behavior::zero(&u).mul(&f).unwrap(), Behavior::zero(&u));
    }

    #[test]
    fn gate_times_policy_restricts() {
        let u = u0();
        let gate = Behavior::gate(&u, &Predicate::eq(0, 0)).unwrap();
        let f = p_w(&u);
        let gated = gate.mul(&f).unwrap();
        for (i, c) in u.enumerate_contexts().iter().enumerate() {
            if c.value(0) == 0 {
                assert_eq!(gated.row(i), f.row(i));
            } else {
                assert!(gated.row(i).is_zero());
            }
        }
    }

    #[test]
    fn one_row_has_powerset_entries() {
        let u = u0();
        for row in Behavior::one(&u).rows() {
            assert_eq!(row.weights().len(), 4);
            assert!(row.weights().values().all(|w| *w == integer(1)));
        }
    }

    #[test]
    fn gate_algebra() {
        let u = u0();
        assert_eq!(Behavior::gate(&u, &Predicate::True).unwrap(), Behavior::one(&u));
        let na = Predicate::eq(0, 0);
        let eu_ctx = u.parse_context("region=EU qtype=A").unwrap();
        assert!(Behavior::gate(&u, &na).unwrap().row_for(&eu_ctx).unwrap().is_zero());

        let q = Predicate::eq(1, 1);
        let lhs = Behavior::gate(&u, &na)
            .unwrap()
            .mul(&Behavior::gate(&u, &q).unwrap())
            .unwrap();
        let rhs = Behavior::gate(&u, &na.clone().and(q.clone())).unwrap();
        assert_eq!(lhs, rhs);

        let or = Behavior::gate(&u, &na.clone().or(q.clone())).unwrap();
        let sum = Behavior::gate(&u, &na)
            .unwrap()
            .add(&Behavior::gate(&u, &q).unwrap())
            .unwrap();
        for i in 0..u.context_count() {
            let s1: Vec<_> = or.row(i).support().collect();
            let s2: Vec<_> = sum.row(i).support().collect();
            assert_eq!(s1, s2);
        }
    }

    #[test]
    fn observable_normalizes() {
        let u = u0();
        let obs = p_w(&u).observable();
        for row in obs.rows() {
            assert_eq!(row.probability(a(0)), weight(1, 4));
            assert_eq!(row.probability(a(1)), weight(3, 4));
        }
        assert!(Behavior::zero(&u)
            .observable()
            .rows()
            .iter()
            .all(ObservableRow::is_empty));
        let doubled = p_w(&u).add(&p_w(&u)).unwrap();
        assert_eq!(doubled.observable(), p_w(&u).observable());
        // the quotient is strict: raw rows differ while observables agree
        assert_ne!(doubled, p_w(&u));
    }

    #[test]
    fn equivalence_and_witness() {
        let u = u0();
        let (g, w) = (p_geo(&u), p_w(&u));
        assert!(g.equiv(&g).unwrap().holds());
        match g.equiv(&w).unwrap() {
            Equivalence::Distinguished(wit) => {
                assert_eq!(u.format_context(&wit.context), "region=NA qtype=A");
                assert_eq!(wit.left.probability(a(0)), integer(1));
                assert_eq!(wit.right.probability(a(0)), weight(1, 4));
            }
            Equivalence::Equivalent => panic!("expected a witness"),
        }
    }

    #[test]
    fn mismatched_universes_are_rejected() {
        let u = u0();
        let other = Arc::new(crate::fixtures::universe_with(&[("region", &["NA"])], 2));
        let f = Behavior::zero(&u);
        let g = Behavior::zero(&other);
        assert_eq!(f.add(&g), Err(Error::UniverseMismatch));
        assert_eq!(f.mul(&g), Err(Error::UniverseMismatch));
        assert_eq!(f.equiv(&g), Err(Error::UniverseMismatch));
    }

    #[test]
    fn negative_weights_rejected() {
        let u = u0();
        assert!(Behavior::weighted(&u, [(a(0), integer(-1))]).is_err());
    }

    #[test]
    fn priority_skips_unhealthy() {
        let u = crate::fixtures::u0_with_health(&[false, true]);
        let p = Behavior::priority(&u, &[0, 1]).unwrap();
        assert!(p.rows().iter().all(|r| *r == OutcomeRow::point(a(1))));
        let none = crate::fixtures::u0_with_health(&[false, false]);
        assert_eq!(Behavior::priority(&none, &[0, 1]).unwrap(), Behavior::zero(&none));
    }

    #[test]
    fn affinity_depends_only_on_its_attribute() {
        let u = u0();
        let f = Behavior::affinity(&u, 0).unwrap();
        for (i, c) in u.enumerate_contexts().iter().enumerate() {
            assert_eq!(f.row(i).weights().len(), 1);
            for (j, d) in u.enumerate_contexts().iter().enumerate() {
                if c.value(0) == d.value(0) {
                    assert_eq!(f.row(i), f.row(j));
                }
            }
        }
    }

    #[test]
    fn no_cancellation() {
        let u = u0();
        let h = Behavior::gate(&u, &Predicate::False).unwrap();
        let (f, g) = (p_geo(&u), p_w(&u));
        assert_ne!(f, g);
        assert_eq!(h.mul(&f).unwrap(), h.mul(&g).unwrap());
        // nothing added back recovers f from the annihilated product
        let hf = h.mul(&f).unwrap();
        assert_ne!(f, hf);
        let samples = [
            Behavior::zero(&u),
            Behavior::one(&u),
            p_w(&u),
            Behavior::fixed(&u, a(0)).unwrap(),
            Behavior::fixed(&u, a(1)).unwrap(),
            Behavior::gate(&u, &Predicate::eq(0, 1)).unwrap(),
        ];
        for k in samples {
            assert_ne!(hf.add(&k).unwrap(), f);
        }
    }

    #[test]
    fn term_walk_matches_composition() {
        let u = u0();
        let term = crate::fixtures::p_geo_term();
        let policy = Policy::new(u.clone(), term.clone()).unwrap();
        assert_eq!(policy.to_behavior(), term.denote(&u).unwrap());
        for i in 0..u.context_count() {
            assert!(policy.evaluate(i).steps <= policy.step_bound());
        }
    }
}
