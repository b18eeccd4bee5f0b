use std::collections::BTreeSet;

use crate::universe::{QueryContext, Universe};

/// A boolean condition over context attributes, with attribute and value
/// positions already resolved against a schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Predicate {
    True,
    False,
    /// `attribute ∈ values`; a singleton set is the `attr = value` test.
    Test {
        attribute: usize,
        values: BTreeSet<usize>,
    },
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
    Not(Box<Predicate>),
}

impl Predicate {
    pub fn eq(attribute: usize, value: usize) -> Self {
        Predicate::Test {
            attribute,
            values: BTreeSet::from([value]),
        }
    }

    pub fn one_of<I: IntoIterator<Item = usize>>(attribute: usize, values: I) -> Self {
        Predicate::Test {
            attribute,
            values: values.into_iter().collect(),
        }
    }

    pub fn and(self, other: Predicate) -> Self {
        Predicate::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Predicate) -> Self {
        Predicate::Or(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Predicate::Not(Box::new(self))
    }

    pub fn holds(&self, context: &QueryContext) -> bool {
        let mut steps = 0;
        self.holds_counted(context, &mut steps)
    }

    /// Evaluates with a step counter; visits each node at most once.
    pub fn holds_counted(&self, context: &QueryContext, steps: &mut usize) -> bool {
        *steps += 1;
        match self {
            Predicate::True => true,
            Predicate::False => false,
            Predicate::Test { attribute, values } => values.contains(&context.value(*attribute)),
            Predicate::And(l, r) => l.holds_counted(context, steps) && r.holds_counted(context, steps),
            Predicate::Or(l, r) => l.holds_counted(context, steps) || r.holds_counted(context, steps),
            Predicate::Not(p) => !p.holds_counted(context, steps),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Predicate::True | Predicate::False | Predicate::Test { .. } => 1,
            Predicate::And(l, r) | Predicate::Or(l, r) => 1 + l.node_count() + r.node_count(),
            Predicate::Not(p) => 1 + p.node_count(),
        }
    }

    /// Attribute positions mentioned anywhere in the predicate.
    pub fn attributes(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_attributes(&mut out);
        out
    }

    fn collect_attributes(&self, out: &mut BTreeSet<usize>) {
        match self {
            Predicate::True | Predicate::False => {}
            Predicate::Test { attribute, .. } => {
                out.insert(*attribute);
            }
            Predicate::And(l, r) | Predicate::Or(l, r) => {
                l.collect_attributes(out);
                r.collect_attributes(out);
            }
            Predicate::Not(p) => p.collect_attributes(out),
        }
    }

    /// Whether every attribute/value position is in range for the universe.
    pub fn fits(&self, universe: &Universe) -> bool {
        match self {
            Predicate::True | Predicate::False => true,
            Predicate::Test { attribute, values } => universe
                .schema()
                .attributes()
                .get(*attribute)
                .is_some_and(|a| values.iter().all(|&v| v < a.domain.len())),
            Predicate::And(l, r) | Predicate::Or(l, r) => l.fits(universe) && r.fits(universe),
            Predicate::Not(p) => p.fits(universe),
        }
    }

    /// Context positions where the predicate holds.
    pub fn extension(&self, universe: &Universe) -> Vec<usize> {
        (0..universe.context_count())
            .filter(|&i| self.holds(&universe.context_at(i)))
            .collect()
    }
}
