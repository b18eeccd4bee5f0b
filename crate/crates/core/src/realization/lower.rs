use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Realization;
use crate::algebra::Behavior;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoweringOptions {
    /// Pair budget; when the subalgebra has more than this many ordered pairs,
    /// this many pairs are sampled instead.
    pub trials: usize,
    pub seed: u64,
    pub max_generated: usize,
    /// Rounds of closure under `⊕` and `⊗` applied to the generators.
    pub depth: usize,
}

impl Default for LoweringOptions {
    fn default() -> Self {
        LoweringOptions {
            trials: 10_000,
            seed: 0,
            max_generated: 2000,
            depth: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LawKind {
    Add,
    Mul,
}

impl LawKind {
    pub fn name(self) -> &'static str {
        match self {
            LawKind::Add => "h(a ⊕ b) = h(a) ⊕ h(b)",
            LawKind::Mul => "h(a ⊗ b) = h(a) ⊗ h(b)",
        }
    }

    fn apply(self, a: &Behavior, b: &Behavior) -> Behavior {
        match self {
            LawKind::Add => a.add(b),
            LawKind::Mul => a.mul(b),
        }
        .expect("same universe")
    }
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Operands on which `h` fails to commute with an operation.
#[derive(Debug, Clone)]
pub struct LoweringCounterexample {
    pub law: LawKind,
    pub left: Behavior,
    pub right: Behavior,
    /// `h(left ∘ right)`.
    pub lowered_result: Behavior,
    /// `h(left) ∘ h(right)`, realized.
    pub composed_images: Behavior,
}

impl LoweringCounterexample {
    /// Recomputes both sides; true when they still differ.
    pub fn replay(&self, realization: &Realization) -> bool {
        let (lhs, rhs) = realization.law_sides(self.law, &self.left, &self.right);
        lhs == self.lowered_result && rhs == self.composed_images && lhs != rhs
    }
}

#[derive(Debug, Clone)]
pub struct LoweringEvidence {
    pub image: Behavior,
    pub subalgebra_size: usize,
    pub pairs_checked: usize,
    pub exhaustive: bool,
}

#[derive(Debug, Clone)]
pub enum LoweringFailure {
    Law(LoweringCounterexample),
    /// `h(f)` satisfies the laws on the sample but is not an admitted approximation of `f`.
    NotAnApproximation {
        image: Behavior,
    },
}

#[derive(Debug, Clone)]
pub enum LoweringVerdict {
    Yes(LoweringEvidence),
    No(LoweringFailure),
}

impl LoweringVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, LoweringVerdict::Yes(_))
    }
}

/// Outcome of trying to tell apart two behaviors that the congruence identifies.
#[derive(Debug, Clone)]
pub struct IrreversibilityCheck {
    pub originally_distinct: bool,
    pub collapsed_equal: bool,
    pub contexts_tried: usize,
    /// Operands `(g, k)` of a context `(g ⊗ ·) ⊕ k` that separated the pair.
    pub separated_by: Option<(Behavior, Behavior)>,
}

impl IrreversibilityCheck {
    pub fn holds(&self) -> bool {
        self.originally_distinct && self.collapsed_equal && self.separated_by.is_none()
    }
}

impl Realization {
    fn law_sides(&self, law: LawKind, a: &Behavior, b: &Behavior) -> (Behavior, Behavior) {
        let lhs = self.realize(&law.apply(a, b));
        let rhs = self.realize(&law.apply(&self.realize(a), &self.realize(b)));
        (lhs, rhs)
    }

    /// `f`, the admissible gates, and their closure under `⊕` and `⊗`, deduplicated.
    pub fn generated_subalgebra(&self, f: &Behavior, depth: usize, max: usize) -> Vec<Behavior> {
        self.check_universe(f);
        let mut seen: HashSet<Behavior> = HashSet::new();
        let mut set: Vec<Behavior> = Vec::new();
        for g in std::iter::once(f.clone()).chain(self.admissible_gates()) {
            if set.len() < max && seen.insert(g.clone()) {
                set.push(g);
            }
        }
        for _ in 0..depth {
            let round = set.len();
            'outer: for i in 0..round {
                for j in 0..round {
                    for law in [LawKind::Add, LawKind::Mul] {
                        if set.len() >= max {
                            break 'outer;
                        }
                        let c = law.apply(&set[i], &set[j]);
                        if seen.insert(c.clone()) {
                            set.push(c);
                        }
                    }
                }
            }
            if set.len() == round {
                break;
            }
        }
        set
    }

    /// Whether the lowering map `h = collapse ∘ coarsen` is a homomorphism on the
    /// subalgebra generated from `f` and the admissible gates, and `h(f)` is an
    /// admitted approximation of `f`.
    ///
    /// The laws are read in the quotient: `h(a ∘ b) = h(h(a) ∘ h(b))`.
    pub fn lowerable(&self, f: &Behavior, options: &LoweringOptions) -> LoweringVerdict {
        let set = self.generated_subalgebra(f, options.depth, options.max_generated);
        let n = set.len();
        let exhaustive = n.checked_mul(n).is_some_and(|p| p <= options.trials);
        let pairs: Vec<(usize, usize)> = if exhaustive {
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            (0..options.trials)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect()
        };
        for &(i, j) in &pairs {
            for law in [LawKind::Add, LawKind::Mul] {
                let (lhs, rhs) = self.law_sides(law, &set[i], &set[j]);
                if lhs != rhs {
                    return LoweringVerdict::No(LoweringFailure::Law(LoweringCounterexample {
                        law,
                        left: set[i].clone(),
                        right: set[j].clone(),
                        lowered_result: lhs,
                        composed_images: rhs,
                    }));
                }
            }
        }
        let image = self.realize(f);
        let approximations = self.approximations(f);
        let found = approximations
            .items
            .iter()
            .any(|a| a.behavior.equiv(&image).map(|e| e.holds()).unwrap_or(false));
        if !found {
            return LoweringVerdict::No(LoweringFailure::NotAnApproximation { image });
        }
        LoweringVerdict::Yes(LoweringEvidence {
            image,
            subalgebra_size: n,
            pairs_checked: pairs.len(),
            exhaustive,
        })
    }

    /// Searches contexts `(g ⊗ ·) ⊕ k`, composed inside the realization, for one
    /// that tells `f` and `f2` apart. Operands come from the subalgebra generated
    /// by both behaviors and the admissible gates; at most `max_contexts` are tried.
    pub fn reseparate(&self, f: &Behavior, f2: &Behavior, max_contexts: usize) -> IrreversibilityCheck {
        let originally_distinct = f != f2;
        let collapsed_equal = self.collapse(f) == self.collapse(f2);
        let mut operands = self.generated_subalgebra(f, 1, max_contexts.max(1));
        if !operands.contains(f2) {
            operands.push(f2.clone());
        }
        let (rf, rf2) = (self.realize(f), self.realize(f2));
        let plug = |x: &Behavior, g: &Behavior, k: &Behavior| self.compose_add(&self.compose_mul(g, x), k);
        let mut tried = 0;
        let mut separated_by = None;
        'search: for g in &operands {
            for k in &operands {
                if tried >= max_contexts {
                    break 'search;
                }
                tried += 1;
                if plug(&rf, g, k) != plug(&rf2, g, k) {
                    separated_by = Some((g.clone(), k.clone()));
                    break 'search;
                }
            }
        }
        IrreversibilityCheck {
            originally_distinct,
            collapsed_equal,
            contexts_tried: tried,
            separated_by,
        }
    }
}
