//! Randomized semiring law checking over exact raw rows.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::Behavior;
use crate::generate::random_behavior;
use crate::universe::Universe;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LawFamily {
    AddAssociative,
    AddCommutative,
    AddIdentity,
    MulAssociative,
    MulIdentity,
    Distributive,
    Annihilation,
}

impl LawFamily {
    pub const ALL: [LawFamily; 7] = [
        LawFamily::AddAssociative,
        LawFamily::AddCommutative,
        LawFamily::AddIdentity,
        LawFamily::MulAssociative,
        LawFamily::MulIdentity,
        LawFamily::Distributive,
        LawFamily::Annihilation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawFamily::AddAssociative => "add-associative",
            LawFamily::AddCommutative => "add-commutative",
            LawFamily::AddIdentity => "add-identity",
            LawFamily::MulAssociative => "mul-associative",
            LawFamily::MulIdentity => "mul-identity",
            LawFamily::Distributive => "distributive",
            LawFamily::Annihilation => "annihilation",
        }
    }
}

impl fmt::Display for LawFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The first failing instance of a law: its equation and the operands used.
#[derive(Debug, Clone)]
pub struct LawViolation {
    pub trial: usize,
    pub equation: &'static str,
    pub operands: [Behavior; 3],
}

#[derive(Debug, Clone)]
pub struct LawResult {
    pub family: LawFamily,
    pub checked: usize,
    pub violation: Option<LawViolation>,
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub trials: usize,
    pub results: Vec<LawResult>,
}

impl LawReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.violation.is_none())
    }
}

/// Every law instance for one triple, as `(family, equation, holds)`.
pub fn check_triple(f: &Behavior, g: &Behavior, h: &Behavior) -> Vec<(LawFamily, &'static str, bool)> {
    let u = f.universe();
    let (zero, one) = (Behavior::zero(u), Behavior::one(u));
    let add = |a: &Behavior, b: &Behavior| a.add(b).expect("same universe");
    let mul = |a: &Behavior, b: &Behavior| a.mul(b).expect("same universe");
    vec![
        (
            LawFamily::AddAssociative,
            "(f ⊕ g) ⊕ h = f ⊕ (g ⊕ h)",
            add(&add(f, g), h) == add(f, &add(g, h)),
        ),
        (LawFamily::AddCommutative, "f ⊕ g = g ⊕ f", add(f, g) == add(g, f)),
        (LawFamily::AddIdentity, "f ⊕ 0 = f", add(f, &zero) == *f),
        (LawFamily::AddIdentity, "0 ⊕ f = f", add(&zero, f) == *f),
        (
            LawFamily::MulAssociative,
            "(f ⊗ g) ⊗ h = f ⊗ (g ⊗ h)",
            mul(&mul(f, g), h) == mul(f, &mul(g, h)),
        ),
        (LawFamily::MulIdentity, "1 ⊗ f = f", mul(&one, f) == *f),
        (LawFamily::MulIdentity, "f ⊗ 1 = f", mul(f, &one) == *f),
        (
            LawFamily::Distributive,
            "h ⊗ (f ⊕ g) = (h ⊗ f) ⊕ (h ⊗ g)",
            mul(h, &add(f, g)) == add(&mul(h, f), &mul(h, g)),
        ),
        (
            LawFamily::Distributive,
            "(f ⊕ g) ⊗ h = (f ⊗ h) ⊕ (g ⊗ h)",
            mul(&add(f, g), h) == add(&mul(f, h), &mul(g, h)),
        ),
        (LawFamily::Annihilation, "0 ⊗ f = 0", mul(&zero, f) == zero),
        (LawFamily::Annihilation, "f ⊗ 0 = 0", mul(f, &zero) == zero),
    ]
}

/// Runs `trials` random triples; each trial draws its universe from `universe_for`.
pub fn check_laws<R, U>(rng: &mut R, trials: usize, mut universe_for: U) -> LawReport
where
    R: Rng + ?Sized,
    U: FnMut(&mut R) -> Arc<Universe>,
{
    let mut results: Vec<LawResult> = LawFamily::ALL
        .iter()
        .map(|&family| LawResult {
            family,
            checked: 0,
            violation: None,
        })
        .collect();
    for trial in 0..trials {
        let u = universe_for(rng);
        let f = random_behavior(rng, &u);
        let g = random_behavior(rng, &u);
        let h = random_behavior(rng, &u);
        for (family, equation, holds) in check_triple(&f, &g, &h) {
            let slot = &mut results[family as usize];
            slot.checked += 1;
            if !holds && slot.violation.is_none() {
                slot.violation = Some(LawViolation {
                    trial,
                    equation,
                    operands: [f.clone(), g.clone(), h.clone()],
                });
            }
        }
    }
    LawReport { trials, results }
}

/// Law check over one fixed universe.
pub fn check_laws_on<R: Rng + ?Sized>(rng: &mut R, universe: &Arc<Universe>, trials: usize) -> LawReport {
    check_laws(rng, trials, |_| universe.clone())
}
