//! Conditional–selection normal form.
//!
//! [`normalize`] groups contexts by their observable outcome (the fibers of
//! `context ↦ observable row`), gives each group a predicate that holds exactly on
//! it, and orders the groups by their first context. [`reconstruct`] turns the
//! result back into `⊕ᵢ (gate(pᵢ) ⊗ selectionᵢ)` using only algebra operations.
//!
//! Normal forms are compared by partition and outcomes, never by predicate syntax.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::algebra::{Behavior, ObservableRow, Predicate, Term};
use crate::error::{Error, Result};
use crate::universe::Universe;

#[derive(Debug, Clone)]
pub struct Region {
    contexts: Vec<usize>,
    outcome: ObservableRow,
    predicate: Predicate,
}

impl Region {
    /// Context positions in ascending order; never empty.
    pub fn contexts(&self) -> &[usize] {
        &self.contexts
    }

    pub fn outcome(&self) -> &ObservableRow {
        &self.outcome
    }

    pub fn predicate(&self) -> &Predicate {
        &self.predicate
    }

    /// The selection serving this region's outcome.
    pub fn selection(&self) -> Term {
        selection_term(&self.outcome)
    }
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.contexts == other.contexts && self.outcome == other.outcome
    }
}

impl Eq for Region {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    universe: Arc<Universe>,
    regions: Vec<Region>,
}

impl NormalForm {
    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    /// Builds a normal form from `(predicate, outcome)` clauses, checking that the
    /// predicates partition the context space.
    pub fn from_clauses(universe: Arc<Universe>, clauses: Vec<(Predicate, ObservableRow)>) -> Result<Self> {
        let mut owner: Vec<Option<usize>> = vec![None; universe.context_count()];
        let mut regions = Vec::with_capacity(clauses.len());
        for (k, (predicate, outcome)) in clauses.into_iter().enumerate() {
            if !predicate.fits(&universe) {
                return Err(Error::Semantic(format!("clause {} does not fit the schema", k + 1)));
            }
            if let ObservableRow::Distribution(d) = &outcome {
                let total = d.values().fold(crate::rational::integer(0), |acc, w| acc + w);
                if total != crate::rational::integer(1) || d.values().any(|w| *w <= crate::rational::integer(0)) {
                    return Err(Error::Semantic(format!(
                        "clause {} outcome is not a distribution",
                        k + 1
                    )));
                }
            }
            let contexts = predicate.extension(&universe);
            if contexts.is_empty() {
                return Err(Error::Semantic(format!("clause {} matches no context", k + 1)));
            }
            for &c in &contexts {
                if let Some(prev) = owner[c].replace(k) {
                    return Err(Error::Semantic(format!(
                        "clauses {} and {} overlap at {}",
                        prev + 1,
                        k + 1,
                        universe.format_context(&universe.context_at(c))
                    )));
                }
            }
            regions.push(Region {
                contexts,
                outcome,
                predicate,
            });
        }
        if let Some(c) = owner.iter().position(Option::is_none) {
            return Err(Error::Semantic(format!(
                "no clause covers {}",
                universe.format_context(&universe.context_at(c))
            )));
        }
        Ok(NormalForm { universe, regions })
    }

    /// The normal form as a policy term: `merge(when p₁ apply S₁, …)`.
    pub fn to_term(&self) -> Term {
        Term::Merge(
            self.regions
                .iter()
                .map(|r| Term::when(r.predicate.clone(), r.selection()))
                .collect(),
        )
    }
}

pub fn selection_term(outcome: &ObservableRow) -> Term {
    match outcome {
        ObservableRow::Empty => Term::Zero,
        ObservableRow::Distribution(d) => Term::Weighted(d.iter().map(|(s, w)| (*s, w.clone())).collect()),
    }
}

/// Fibers of the observable, ordered by first context.
pub fn normalize(f: &Behavior) -> NormalForm {
    let universe = f.universe().clone();
    let mut index: HashMap<ObservableRow, usize> = HashMap::new();
    let mut groups: Vec<(ObservableRow, Vec<usize>)> = Vec::new();
    for (i, row) in f.observable().rows().iter().enumerate() {
        match index.get(row) {
            Some(&g) => groups[g].1.push(i),
            None => {
                index.insert(row.clone(), groups.len());
                groups.push((row.clone(), vec![i]));
            }
        }
    }
    let regions = groups
        .into_iter()
        .map(|(outcome, contexts)| Region {
            predicate: synthesize_predicate(&universe, &contexts),
            contexts,
            outcome,
        })
        .collect();
    NormalForm { universe, regions }
}

/// `⊕ᵢ (gate(pᵢ) ⊗ selectionᵢ)`.
pub fn reconstruct(nf: &NormalForm) -> Behavior {
    nf.regions.iter().fold(Behavior::zero(&nf.universe), |acc, region| {
        let gate = Behavior::gate(&nf.universe, &region.predicate).expect("synthesized predicate fits");
        let selection = region.selection().denote(&nf.universe).expect("outcome fits");
        acc.add(&gate.mul(&selection).expect("same universe"))
            .expect("same universe")
    })
}

pub fn region_count(f: &Behavior) -> usize {
    f.observable().rows().iter().collect::<BTreeSet<_>>().len()
}

type Cube = Vec<BTreeSet<usize>>;

/// A predicate holding exactly on `contexts`.
///
/// Starts from one full-assignment cube per context and repeatedly merges cubes
/// that differ in a single attribute, unioning that attribute's value set. An
/// attribute whose set reaches the full domain is dropped from the cube. The
/// result is an exact, disjoint cover; it is not guaranteed minimal.
pub fn synthesize_predicate(universe: &Universe, contexts: &[usize]) -> Predicate {
    let domains: Vec<usize> = universe.schema().attributes().iter().map(|a| a.domain.len()).collect();
    let mut cubes: Vec<Cube> = contexts
        .iter()
        .map(|&i| {
            universe
                .context_at(i)
                .values()
                .iter()
                .map(|&v| BTreeSet::from([v]))
                .collect()
        })
        .collect();
    loop {
        let before = cubes.len();
        for j in 0..domains.len() {
            let mut merged: BTreeMap<Cube, BTreeSet<usize>> = BTreeMap::new();
            for mut cube in cubes {
                let values = std::mem::take(&mut cube[j]);
                merged.entry(cube).or_default().extend(values);
            }
            cubes = merged
                .into_iter()
                .map(|(mut cube, values)| {
                    cube[j] = values;
                    cube
                })
                .collect();
        }
        if cubes.len() == before {
            break;
        }
    }
    cubes.sort();
    let conjunction = |cube: &Cube| {
        cube.iter()
            .enumerate()
            .filter(|(j, values)| values.len() < domains[*j])
            .map(|(j, values)| Predicate::Test {
                attribute: j,
                values: values.clone(),
            })
            .reduce(Predicate::and)
            .unwrap_or(Predicate::True)
    };
    cubes
        .iter()
        .map(conjunction)
        .reduce(Predicate::or)
        .unwrap_or(Predicate::False)
}
