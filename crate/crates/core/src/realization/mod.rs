//! Realizations: restricted views of the semantic domain.
//!
//! A [`RealizationProfile`] restricts the domain in two independent ways:
//!
//! * substructure: which attributes predicates may test, which selection
//!   primitives exist, how many regions fit, which weights are on the grid;
//! * congruence: weight quantization and forgetting of distributions, which
//!   identify behaviors that were distinct.
//!
//! [`Realization`] binds a profile to a universe and answers admission,
//! collapse, representability, approximation and lowering questions.

mod approx;
mod distinction;
mod lower;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{Behavior, ObservableRow, OutcomeRow, Predicate, SelectionKind};
use crate::error::{Error, Result};
use crate::normalform::normalize;
use crate::rational::{format_weight, Weight};
use crate::universe::{AnswerSet, Universe};

pub use approx::{Approximation, ApproximationSet, MAX_APPROXIMATION_CANDIDATES};
pub use distinction::{distinctions, preserved, DistinctionSet};
pub use lower::{
    IrreversibilityCheck, LawKind, LoweringCounterexample, LoweringEvidence, LoweringFailure, LoweringOptions,
    LoweringVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttributeScope {
    All,
    Only(BTreeSet<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationProfile {
    pub name: String,
    pub attributes: AttributeScope,
    pub selections: BTreeSet<SelectionKind>,
    pub weight_quantum: Option<Weight>,
    pub max_regions: Option<usize>,
    pub forget_distribution: bool,
}

impl RealizationProfile {
    /// All attributes, all selections, no quantum, no region limit, no forgetting.
    pub fn unrestricted(name: impl Into<String>) -> Self {
        RealizationProfile {
            name: name.into(),
            attributes: AttributeScope::All,
            selections: SelectionKind::ALL.into_iter().collect(),
            weight_quantum: None,
            max_regions: None,
            forget_distribution: false,
        }
    }

    pub fn with_attributes<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.attributes = AttributeScope::Only(names.into_iter().map(Into::into).collect());
        self
    }

    pub fn with_selections<I: IntoIterator<Item = SelectionKind>>(mut self, kinds: I) -> Self {
        self.selections = kinds.into_iter().collect();
        self
    }

    pub fn with_quantum(mut self, quantum: Weight) -> Self {
        self.weight_quantum = Some(quantum);
        self
    }

    pub fn with_max_regions(mut self, max: usize) -> Self {
        self.max_regions = Some(max);
        self
    }

    pub fn forgetting(mut self) -> Self {
        self.forget_distribution = true;
        self
    }

    /// Whether the induced congruence identifies nothing.
    pub fn is_identity_congruence(&self) -> bool {
        self.weight_quantum.is_none() && !self.forget_distribution
    }
}

/// First violated restriction when a behavior is not admitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ForbiddenAttribute {
        region: usize,
        attribute: String,
    },
    SelectionNotExpressible {
        region: usize,
        reason: &'static str,
    },
    OffGrid {
        region: usize,
        answer: String,
        weight: String,
    },
    TooManyRegions {
        regions: usize,
        max: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ForbiddenAttribute { region, attribute } => write!(
                f,
                "region {} discriminates on attribute `{attribute}`, which the realization cannot test",
                region + 1
            ),
            Violation::SelectionNotExpressible { region, reason } => write!(f, "region {}: {reason}", region + 1),
            Violation::OffGrid { region, answer, weight } => {
                write!(
                    f,
                    "region {}: weight {weight} on {answer} is off the quantum grid",
                    region + 1
                )
            }
            Violation::TooManyRegions { regions, max } => {
                write!(f, "{regions} regions exceed the limit of {max}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admission {
    Admitted,
    Rejected(Violation),
}

impl Admission {
    pub fn is_admitted(&self) -> bool {
        matches!(self, Admission::Admitted)
    }
}

/// A profile bound to a universe.
#[derive(Debug, Clone)]
pub struct Realization {
    profile: RealizationProfile,
    universe: Arc<Universe>,
    allowed: Vec<bool>,
    /// `1 / weight_quantum`, when quantized.
    units: Option<BigInt>,
}

impl Realization {
    pub fn new(profile: RealizationProfile, universe: Arc<Universe>) -> Result<Self> {
        let schema = universe.schema();
        let allowed = match &profile.attributes {
            AttributeScope::All => vec![true; schema.len()],
            AttributeScope::Only(names) => {
                if let Some(bad) = names.iter().find(|n| schema.attribute_index(n).is_none()) {
                    return Err(Error::InvalidProfile(format!(
                        "profile `{}` allows unknown attribute `{bad}`",
                        profile.name
                    )));
                }
                schema.attributes().iter().map(|a| names.contains(&a.name)).collect()
            }
        };
        let units = match &profile.weight_quantum {
            None => None,
            Some(q) => {
                if *q <= Weight::zero() || !q.numer().is_one() {
                    return Err(Error::InvalidProfile(format!(
                        "weight quantum {} must be 1/n for a positive integer n",
                        format_weight(q)
                    )));
                }
                Some(q.denom().clone())
            }
        };
        if profile.max_regions == Some(0) {
            return Err(Error::InvalidProfile("max_regions must be positive".into()));
        }
        Ok(Realization {
            profile,
            universe,
            allowed,
            units,
        })
    }

    pub fn unrestricted(universe: Arc<Universe>) -> Self {
        Realization::new(RealizationProfile::unrestricted("unrestricted"), universe)
            .expect("unrestricted profile is always valid")
    }

    pub fn profile(&self) -> &RealizationProfile {
        &self.profile
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn allows_attribute(&self, attribute: usize) -> bool {
        self.allowed[attribute]
    }

    fn all_attributes_allowed(&self) -> bool {
        self.allowed.iter().all(|&a| a)
    }

    fn check_universe(&self, f: &Behavior) {
        assert!(
            Arc::ptr_eq(f.universe(), &self.universe) || **f.universe() == *self.universe,
            "behavior is not over the realization's universe"
        );
    }

    /// Whether the realization can express `f` as it stands.
    pub fn admits(&self, f: &Behavior) -> Admission {
        self.check_universe(f);
        let nf = normalize(f);
        for (k, region) in nf.regions().iter().enumerate() {
            if let Some(attr) = region.predicate().attributes().into_iter().find(|&a| !self.allowed[a]) {
                return Admission::Rejected(Violation::ForbiddenAttribute {
                    region: k,
                    attribute: self.universe.schema().attributes()[attr].name.clone(),
                });
            }
            if let Err(reason) = self.expressible(region.outcome(), region.contexts()) {
                return Admission::Rejected(Violation::SelectionNotExpressible { region: k, reason });
            }
            if let Some((set, w)) = self.off_grid(region.outcome()) {
                return Admission::Rejected(Violation::OffGrid {
                    region: k,
                    answer: self.universe.format_answer_set(set),
                    weight: format_weight(&w),
                });
            }
        }
        match self.profile.max_regions {
            Some(max) if nf.len() > max => Admission::Rejected(Violation::TooManyRegions { regions: nf.len(), max }),
            _ => Admission::Admitted,
        }
    }

    /// Whether some allowed selection primitive serves `outcome` on `contexts`.
    pub(crate) fn expressible(&self, outcome: &ObservableRow, contexts: &[usize]) -> Result<(), &'static str> {
        let kinds = &self.profile.selections;
        let dist = match outcome {
            ObservableRow::Empty => return Ok(()),
            ObservableRow::Distribution(d) => d,
        };
        if dist.len() > 1 {
            return if kinds.contains(&SelectionKind::Weighted) {
                Ok(())
            } else {
                Err("weighted outcome not expressible")
            };
        }
        if kinds.contains(&SelectionKind::Fixed) || kinds.contains(&SelectionKind::Weighted) {
            return Ok(());
        }
        let set = *dist.keys().next().expect("nonempty distribution");
        let point = OutcomeRow::point(set);
        if set.len() == 1 {
            let c = set.indices().next().expect("singleton");
            if kinds.contains(&SelectionKind::Priority) && self.universe.candidates()[c].is_healthy() {
                return Ok(());
            }
            if kinds.contains(&SelectionKind::Affinity) {
                let by_affinity = (0..self.universe.schema().len()).filter(|&a| self.allowed[a]).any(|a| {
                    let choice = Behavior::affinity(&self.universe, a).expect("attribute in range");
                    contexts.iter().all(|&i| *choice.row(i) == point)
                });
                if by_affinity {
                    return Ok(());
                }
            }
        }
        Err("fixed-set outcome not expressible")
    }

    /// First weight not on the quantum grid, unless distributions are forgotten anyway.
    fn off_grid(&self, outcome: &ObservableRow) -> Option<(AnswerSet, Weight)> {
        let units = self.units.as_ref()?;
        if self.profile.forget_distribution {
            return None;
        }
        match outcome {
            ObservableRow::Empty => None,
            ObservableRow::Distribution(d) => d
                .iter()
                .find(|(_, w)| !(*w * Weight::from_integer(units.clone())).is_integer())
                .map(|(s, w)| (*s, w.clone())),
        }
    }

    /// Canonical representative of `f`'s congruence class.
    ///
    /// With quantization, each context's distribution is apportioned onto the grid
    /// `{0, q, 2q, …, 1}` by largest remainder (ties to the earlier answer set), which
    /// keeps the sum at exactly 1. Forgetting then serves the surviving support
    /// uniformly. The identity congruence returns `f` unchanged.
    pub fn collapse(&self, f: &Behavior) -> Behavior {
        self.check_universe(f);
        if self.profile.is_identity_congruence() {
            return f.clone();
        }
        let rows = f
            .rows()
            .iter()
            .map(|r| self.collapse_row(&ObservableRow::of(r)).to_row())
            .collect();
        Behavior::from_rows(f.universe().clone(), rows).expect("same shape")
    }

    pub(crate) fn collapse_row(&self, outcome: &ObservableRow) -> ObservableRow {
        let ObservableRow::Distribution(dist) = outcome else {
            return ObservableRow::Empty;
        };
        let mut dist = dist.clone();
        if let Some(units) = &self.units {
            dist = apportion(&dist, units);
        }
        if self.profile.forget_distribution {
            let share = Weight::new(BigInt::one(), BigInt::from(dist.len()));
            dist = dist.into_keys().map(|s| (s, share.clone())).collect();
        }
        ObservableRow::Distribution(dist)
    }

    pub fn exactly_representable(&self, f: &Behavior) -> bool {
        self.admits(f).is_admitted() && self.collapse(f).equiv(f).map(|e| e.holds()).unwrap_or(false)
    }

    /// Replaces each row by the average observable over contexts that agree on every
    /// allowed attribute. Identity when all attributes are allowed.
    pub fn coarsen(&self, f: &Behavior) -> Behavior {
        self.check_universe(f);
        if self.all_attributes_allowed() {
            return f.clone();
        }
        let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for i in 0..self.universe.context_count() {
            classes.entry(self.cylinder_key(i)).or_default().push(i);
        }
        let mut rows = vec![OutcomeRow::zero(); self.universe.context_count()];
        for members in classes.values() {
            let avg = average(members.iter().map(|&i| f.observable_at(i)), members.len());
            for &i in members {
                rows[i] = avg.clone();
            }
        }
        Behavior::from_rows(f.universe().clone(), rows).expect("same shape")
    }

    pub(crate) fn cylinder_key(&self, context_index: usize) -> Vec<usize> {
        self.universe
            .context_at(context_index)
            .values()
            .iter()
            .zip(&self.allowed)
            .filter(|(_, &ok)| ok)
            .map(|(&v, _)| v)
            .collect()
    }

    /// The lowering map: coarsening onto allowed attributes, then collapse.
    pub fn realize(&self, f: &Behavior) -> Behavior {
        self.collapse(&self.coarsen(f))
    }

    /// `⊕` inside the realization: realize the sum of realized operands.
    pub fn compose_add(&self, a: &Behavior, b: &Behavior) -> Behavior {
        self.realize(&self.realize(a).add(&self.realize(b)).expect("same universe"))
    }

    /// `⊗` inside the realization.
    pub fn compose_mul(&self, a: &Behavior, b: &Behavior) -> Behavior {
        self.realize(&self.realize(a).mul(&self.realize(b)).expect("same universe"))
    }

    /// Gates for every `attr = value` test the realization may use, plus `0` and `1`.
    pub fn admissible_gates(&self) -> Vec<Behavior> {
        let u = &self.universe;
        let mut gates = vec![Behavior::zero(u), Behavior::one(u)];
        for (a, attr) in u.schema().attributes().iter().enumerate() {
            if !self.allowed[a] {
                continue;
            }
            for v in 0..attr.domain.len() {
                gates.push(Behavior::gate(u, &Predicate::eq(a, v)).expect("in range"));
            }
        }
        gates
    }
}

/// Largest-remainder apportionment of `units` grid steps.
fn apportion(dist: &BTreeMap<AnswerSet, Weight>, units: &BigInt) -> BTreeMap<AnswerSet, Weight> {
    let scale = Weight::from_integer(units.clone());
    let mut shares: Vec<(AnswerSet, BigInt, Weight)> = dist
        .iter()
        .map(|(s, p)| {
            let quota = p * &scale;
            let floor = quota.floor().to_integer();
            let remainder = quota - Weight::from_integer(floor.clone());
            (*s, floor, remainder)
        })
        .collect();
    let assigned = shares.iter().fold(BigInt::zero(), |acc, (_, f, _)| acc + f);
    let leftover = (units - assigned)
        .to_usize()
        .expect("fewer leftover units than entries");
    let mut order: Vec<usize> = (0..shares.len()).collect();
    // stable: equal remainders keep answer-set order
    order.sort_by(|&x, &y| shares[y].2.cmp(&shares[x].2));
    for &k in order.iter().take(leftover) {
        shares[k].1 += 1;
    }
    shares
        .into_iter()
        .filter(|(_, n, _)| !n.is_zero())
        .map(|(s, n, _)| (s, Weight::new(n, units.clone())))
        .collect()
}

/// Count-weighted average of observable rows; `Empty` contributes nothing.
fn average<I: Iterator<Item = ObservableRow>>(rows: I, count: usize) -> OutcomeRow {
    let sum = rows.fold(OutcomeRow::zero(), |acc, r| acc.add(&r.to_row()));
    sum.scale(&Weight::new(BigInt::one(), BigInt::from(count)))
}
