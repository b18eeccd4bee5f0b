use std::collections::BTreeMap;

use super::distinction::{distinctions, preserved, DistinctionSet};
use super::Realization;
use crate::algebra::{Behavior, ObservableRow};
use crate::normalform::normalize;

/// Upper bound on candidate combinations examined by [`Realization::approximations`].
pub const MAX_APPROXIMATION_CANDIDATES: usize = 4096;

#[derive(Debug, Clone)]
pub struct Approximation {
    pub behavior: Behavior,
    /// Distinctions of the target this approximation keeps.
    pub preserved: DistinctionSet,
    pub minimal: bool,
}

#[derive(Debug, Clone)]
pub struct ApproximationSet {
    pub target_distinctions: DistinctionSet,
    pub items: Vec<Approximation>,
    /// Whether the candidate product was cut at [`MAX_APPROXIMATION_CANDIDATES`].
    pub truncated: bool,
}

impl ApproximationSet {
    /// `items[i] ⪯ items[j]`: `i` keeps every target distinction that `j` keeps.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        self.items[j].preserved.is_subset(&self.items[i].preserved)
    }

    pub fn minimal(&self) -> impl Iterator<Item = &Approximation> {
        self.items.iter().filter(|a| a.minimal)
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller position as root so roots are first contexts
        if ra < rb {
            self.0[rb] = ra;
        } else if rb < ra {
            self.0[ra] = rb;
        }
    }
}

impl Realization {
    /// Admitted approximations of `f`, with `⪯_f`-minimal ones flagged.
    ///
    /// The target's regions are merged until each merged region is a union of
    /// cylinders over the allowed attributes. A merged region that is a single
    /// target region with a realizable outcome keeps it. Any other merged region
    /// is offered the context-weighted average row, the most frequent row, and a
    /// point mass on each answer set in the union of supports, each passed through
    /// the congruence. Every combination that the realization admits is kept once.
    pub fn approximations(&self, f: &Behavior) -> ApproximationSet {
        self.check_universe(f);
        let u = &self.universe;
        let n = u.context_count();
        let nf = normalize(f);
        let observable = f.observable();

        let mut region_of = vec![0usize; n];
        for (k, region) in nf.regions().iter().enumerate() {
            for &i in region.contexts() {
                region_of[i] = k;
            }
        }
        let mut uf = UnionFind((0..n).collect());
        let mut cylinder_root: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (i, &k) in region_of.iter().enumerate() {
            uf.union(i, nf.regions()[k].contexts()[0]);
            let root = *cylinder_root.entry(self.cylinder_key(i)).or_insert(i);
            uf.union(i, root);
        }
        let mut merged: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let root = uf.find(i);
            merged.entry(root).or_default().push(i);
        }
        let merged: Vec<Vec<usize>> = merged.into_values().collect();

        let options: Vec<Vec<ObservableRow>> = merged
            .iter()
            .map(|members| self.region_options(members, &region_of, observable.rows()))
            .collect();

        let target_distinctions = distinctions(f);
        let mut items: Vec<Approximation> = Vec::new();
        let mut truncated = false;
        let total: Option<usize> = options.iter().try_fold(1usize, |acc, o| acc.checked_mul(o.len()));
        let combinations = match total {
            Some(t) if t <= MAX_APPROXIMATION_CANDIDATES => t,
            _ => {
                truncated = true;
                MAX_APPROXIMATION_CANDIDATES
            }
        };
        if options.iter().all(|o| !o.is_empty()) {
            for mut code in 0..combinations {
                let mut rows = vec![ObservableRow::Empty; n];
                // mixed radix, last merged region varying fastest
                for (members, opts) in merged.iter().zip(&options).rev() {
                    let choice = &opts[code % opts.len()];
                    code /= opts.len();
                    for &i in members {
                        rows[i] = choice.clone();
                    }
                }
                let candidate = Behavior::from_rows(u.clone(), rows.iter().map(ObservableRow::to_row).collect())
                    .expect("same shape");
                if !self.admits(&candidate).is_admitted() {
                    continue;
                }
                if items.iter().any(|a| a.behavior == candidate) {
                    continue;
                }
                let kept = preserved(f, &candidate).expect("same universe");
                items.push(Approximation {
                    behavior: candidate,
                    preserved: kept,
                    minimal: false,
                });
            }
        }
        for i in 0..items.len() {
            // minimal: nobody keeps a strict superset of what i keeps
            let strictly_better = items.iter().enumerate().any(|(j, other)| {
                j != i
                    && items[i].preserved.is_subset(&other.preserved)
                    && !other.preserved.is_subset(&items[i].preserved)
            });
            items[i].minimal = !strictly_better;
        }
        ApproximationSet {
            target_distinctions,
            items,
            truncated,
        }
    }

    fn region_options(&self, members: &[usize], region_of: &[usize], rows: &[ObservableRow]) -> Vec<ObservableRow> {
        let first = &rows[members[0]];
        let single_region = members.iter().all(|&i| region_of[i] == region_of[members[0]]);
        if single_region && self.realizable_row(first, members) && self.collapse_row(first) == *first {
            return vec![first.clone()];
        }

        let mut candidates = Vec::new();
        let average = super::average(members.iter().map(|&i| rows[i].clone()), members.len());
        candidates.push(ObservableRow::of(&average));

        let mut counts: Vec<(&ObservableRow, usize)> = Vec::new();
        for &i in members {
            match counts.iter_mut().find(|(r, _)| **r == rows[i]) {
                Some((_, c)) => *c += 1,
                None => counts.push((&rows[i], 1)),
            }
        }
        let top = counts.iter().map(|(_, c)| *c).max().unwrap_or(0);
        if let Some((majority, _)) = counts.iter().find(|(_, c)| *c == top) {
            candidates.push((*majority).clone());
        }

        let mut support: Vec<_> = members.iter().flat_map(|&i| rows[i].support()).collect();
        support.sort();
        support.dedup();
        candidates.extend(
            support
                .into_iter()
                .map(|s| ObservableRow::of(&crate::algebra::OutcomeRow::point(s))),
        );

        let mut options: Vec<ObservableRow> = Vec::new();
        for c in candidates {
            let c = self.collapse_row(&c);
            if self.realizable_row(&c, members) && !options.contains(&c) {
                options.push(c);
            }
        }
        options
    }

    fn realizable_row(&self, row: &ObservableRow, contexts: &[usize]) -> bool {
        self.expressible(row, contexts).is_ok() && self.off_grid(row).is_none()
    }
}
