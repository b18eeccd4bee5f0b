//! The finite resolver-visible input space and the candidate answer set.
//!
//! A [`Universe`] fixes three things every other module relies on:
//!
//! * an [`AttributeSchema`]: named attributes with finite symbolic domains, whose
//!   cartesian product is the set of query contexts,
//! * an ordered list of [`Candidate`] answers, each a whole RRset plus metadata,
//! * the [`Limits`] that keep powerset materialization and context enumeration tractable.
//!
//! Contexts are enumerated lexicographically: the first attribute is the most
//! significant digit and each domain is walked in declaration order.

use std::cmp::Ordering;
use std::fmt;
use std::net::{Ipv4Addr, Ipv6Addr};

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{format_weight, integer, Weight};

pub const DEFAULT_MAX_CONTEXTS: usize = 65536;
pub const DEFAULT_MAX_CANDIDATES: usize = 8;
/// Answer sets are bitmasks and `one()` materializes the powerset, so this is a hard ceiling.
pub const HARD_MAX_CANDIDATES: usize = 16;

/// Words the text formats treat as syntax; attribute names may not use them.
pub const RESERVED_WORDS: &[&str] = &[
    "when", "apply", "merge", "fixed", "weighted", "priority", "affinity", "zero", "one", "product", "and", "or",
    "not", "in", "true", "false", "serve", "empty", "universe",
];

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'-' | b'.'))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_contexts: usize,
    pub max_candidates: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_contexts: DEFAULT_MAX_CONTEXTS,
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub domain: Vec<String>,
}

impl Attribute {
    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.domain.iter().position(|v| v == value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSchema {
    attributes: Vec<Attribute>,
}

impl AttributeSchema {
    pub fn new<N, V, I>(attributes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (N, Vec<V>)>,
        N: Into<String>,
        V: Into<String>,
    {
        let attributes: Vec<Attribute> = attributes
            .into_iter()
            .map(|(name, domain)| Attribute {
                name: name.into(),
                domain: domain.into_iter().map(Into::into).collect(),
            })
            .collect();
        for (i, attr) in attributes.iter().enumerate() {
            if !is_identifier(&attr.name) || RESERVED_WORDS.contains(&attr.name.as_str()) {
                return Err(Error::InvalidUniverse(format!(
                    "`{}` is not a usable attribute name",
                    attr.name
                )));
            }
            if attributes[..i].iter().any(|a| a.name == attr.name) {
                return Err(Error::InvalidUniverse(format!("duplicate attribute `{}`", attr.name)));
            }
            if attr.domain.is_empty() {
                return Err(Error::InvalidUniverse(format!(
                    "attribute `{}` has an empty domain",
                    attr.name
                )));
            }
            for (j, v) in attr.domain.iter().enumerate() {
                if !is_identifier(v) {
                    return Err(Error::InvalidUniverse(format!(
                        "`{v}` is not a usable value of `{}`",
                        attr.name
                    )));
                }
                if attr.domain[..j].contains(v) {
                    return Err(Error::InvalidUniverse(format!(
                        "duplicate value `{v}` in `{}`",
                        attr.name
                    )));
                }
            }
        }
        Ok(AttributeSchema { attributes })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    /// Product of domain sizes, or `None` on overflow.
    pub fn context_count(&self) -> Option<usize> {
        self.attributes
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.domain.len()))
    }
}

/// One point of the context space: a value index for every schema attribute, in schema order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QueryContext {
    values: Vec<usize>,
}

impl QueryContext {
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, attribute: usize) -> usize {
        self.values[attribute]
    }
}

/// A subset of the candidate list, as a bitmask over candidate positions.
///
/// Ordered by size first, then lexicographically by the sorted candidate positions,
/// which is the order [`Universe::subsets`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AnswerSet(u32);

impl AnswerSet {
    pub const EMPTY: AnswerSet = AnswerSet(0);

    pub fn from_bits(bits: u32) -> Self {
        AnswerSet(bits)
    }

    pub fn singleton(index: usize) -> Self {
        AnswerSet(1 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        AnswerSet(indices.into_iter().fold(0, |acc, i| acc | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    pub fn with(self, index: usize) -> Self {
        AnswerSet(self.0 | (1 << index))
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |i| self.0 & (1 << i) != 0)
    }
}

impl Ord for AnswerSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let diff = self.0 ^ other.0;
            if diff == 0 {
                Ordering::Equal
            } else if self.0 & (diff & diff.wrapping_neg()) != 0 {
                // the lowest differing position belongs to self, so self's sorted
                // index list is the lexicographically smaller one
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for AnswerSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RrType {
    A,
    Aaaa,
}

impl RrType {
    pub fn code(self) -> u16 {
        match self {
            RrType::A => 1,
            RrType::Aaaa => 28,
        }
    }

    pub fn rdata_len(self) -> usize {
        match self {
            RrType::A => 4,
            RrType::Aaaa => 16,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "A" => Ok(RrType::A),
            "AAAA" => Ok(RrType::Aaaa),
            other => Err(Error::InvalidUniverse(format!("unsupported rrtype `{other}`"))),
        }
    }

    /// Parses the textual address form of an rdata value.
    pub fn parse_rdata(self, text: &str) -> Result<Vec<u8>> {
        let bad = || Error::InvalidUniverse(format!("`{text}` is not valid {self} rdata"));
        match self {
            RrType::A => Ok(text.parse::<Ipv4Addr>().map_err(|_| bad())?.octets().to_vec()),
            RrType::Aaaa => Ok(text.parse::<Ipv6Addr>().map_err(|_| bad())?.octets().to_vec()),
        }
    }
}

impl fmt::Display for RrType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RrType::A => "A",
            RrType::Aaaa => "AAAA",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Record {
    pub rdata: Vec<u8>,
    pub rrtype: RrType,
    pub ttl: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Health {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metadata {
    pub weight: Weight,
    pub priority: i64,
    pub tag: Option<String>,
    pub health: Health,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata {
            weight: integer(1),
            priority: 0,
            tag: None,
            health: Health::Up,
        }
    }
}

/// A candidate answer: one whole RRset and its selection metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    id: String,
    records: Vec<Record>,
    metadata: Metadata,
}

impl Candidate {
    pub fn new(id: impl Into<String>, records: Vec<Record>, metadata: Metadata) -> Result<Self> {
        let id = id.into();
        if !is_identifier(&id) {
            return Err(Error::InvalidUniverse(format!("`{id}` is not a usable candidate id")));
        }
        let Some(first) = records.first() else {
            return Err(Error::InvalidUniverse(format!("candidate `{id}` has an empty rrset")));
        };
        if records.iter().any(|r| r.rrtype != first.rrtype || r.ttl != first.ttl) {
            return Err(Error::InvalidUniverse(format!(
                "candidate `{id}` mixes rrtypes or ttls within one rrset"
            )));
        }
        if let Some(r) = records.iter().find(|r| r.rdata.len() != r.rrtype.rdata_len()) {
            return Err(Error::InvalidUniverse(format!(
                "candidate `{id}` has {} rdata of length {}",
                r.rrtype,
                r.rdata.len()
            )));
        }
        if metadata.weight.is_negative() {
            return Err(Error::InvalidUniverse(format!(
                "candidate `{id}` has negative weight {}",
                format_weight(&metadata.weight)
            )));
        }
        Ok(Candidate { id, records, metadata })
    }

    /// Convenience constructor for a healthy single-type candidate.
    pub fn with_rdata(id: impl Into<String>, rrtype: RrType, ttl: u32, rdata: Vec<Vec<u8>>) -> Result<Self> {
        let records = rdata.into_iter().map(|rdata| Record { rdata, rrtype, ttl }).collect();
        Candidate::new(id, records, Metadata::default())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn metadata(&self) -> &Metadata {
        &self.metadata
    }

    pub fn rrtype(&self) -> RrType {
        self.records[0].rrtype
    }

    pub fn ttl(&self) -> u32 {
        self.records[0].ttl
    }

    pub fn is_healthy(&self) -> bool {
        self.metadata.health == Health::Up
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    schema: AttributeSchema,
    candidates: Vec<Candidate>,
    limits: Limits,
    context_count: usize,
}

impl Universe {
    pub fn new(schema: AttributeSchema, candidates: Vec<Candidate>) -> Result<Self> {
        Self::with_limits(schema, candidates, Limits::default())
    }

    pub fn with_limits(schema: AttributeSchema, candidates: Vec<Candidate>, limits: Limits) -> Result<Self> {
        let context_count = schema.context_count().ok_or(Error::CapExceeded {
            what: "context",
            limit: limits.max_contexts,
            actual: usize::MAX,
        })?;
        if context_count > limits.max_contexts {
            return Err(Error::CapExceeded {
                what: "context",
                limit: limits.max_contexts,
                actual: context_count,
            });
        }
        let candidate_cap = limits.max_candidates.min(HARD_MAX_CANDIDATES);
        if candidates.len() > candidate_cap {
            return Err(Error::CapExceeded {
                what: "candidate",
                limit: candidate_cap,
                actual: candidates.len(),
            });
        }
        for (i, c) in candidates.iter().enumerate() {
            if candidates[..i].iter().any(|o| o.id == c.id) {
                return Err(Error::InvalidUniverse(format!("duplicate candidate `{}`", c.id)));
            }
        }
        Ok(Universe {
            schema,
            candidates,
            limits,
            context_count,
        })
    }

    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn candidate_index(&self, id: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c.id == id)
    }

    pub fn context_count(&self) -> usize {
        self.context_count
    }

    /// Mixed-radix decoding of a context position.
    pub fn context_at(&self, mut index: usize) -> QueryContext {
        debug_assert!(index < self.context_count);
        let mut values = vec![0; self.schema.len()];
        for (slot, attr) in values.iter_mut().zip(&self.schema.attributes).rev() {
            let radix = attr.domain.len();
            *slot = index % radix;
            index /= radix;
        }
        QueryContext { values }
    }

    pub fn context_index(&self, context: &QueryContext) -> Result<usize> {
        if context.values.len() != self.schema.len() {
            return Err(Error::ContextOutsideUniverse);
        }
        context
            .values
            .iter()
            .zip(&self.schema.attributes)
            .try_fold(0usize, |acc, (&v, attr)| {
                if v < attr.domain.len() {
                    Ok(acc * attr.domain.len() + v)
                } else {
                    Err(Error::ContextOutsideUniverse)
                }
            })
    }

    /// All contexts, each exactly once, in lexicographic order.
    pub fn enumerate_contexts(&self) -> Vec<QueryContext> {
        (0..self.context_count).map(|i| self.context_at(i)).collect()
    }

    /// Builds a context from a total `attribute = value` assignment.
    pub fn context<'a, I>(&self, assignment: I) -> Result<QueryContext>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut values: Vec<Option<usize>> = vec![None; self.schema.len()];
        for (name, value) in assignment {
            let a = self
                .schema
                .attribute_index(name)
                .ok_or_else(|| Error::UnknownAttribute(name.to_string()))?;
            let v = self.schema.attributes[a]
                .value_index(value)
                .ok_or_else(|| Error::UnknownValue {
                    attribute: name.to_string(),
                    value: value.to_string(),
                })?;
            values[a] = Some(v);
        }
        let values = values
            .into_iter()
            .zip(&self.schema.attributes)
            .map(|(v, attr)| {
                v.ok_or_else(|| Error::Semantic(format!("context leaves attribute `{}` unassigned", attr.name)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QueryContext { values })
    }

    /// Parses `region=NA qtype=A` (separated by spaces or commas).
    pub fn parse_context(&self, text: &str) -> Result<QueryContext> {
        let pairs = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|pair| {
                pair.split_once('=')
                    .ok_or_else(|| Error::Semantic(format!("expected attribute=value, found `{pair}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.context(pairs)
    }

    pub fn assignment<'a>(&'a self, context: &QueryContext) -> Vec<(&'a str, &'a str)> {
        self.schema
            .attributes
            .iter()
            .zip(&context.values)
            .map(|(a, &v)| (a.name.as_str(), a.domain[v].as_str()))
            .collect()
    }

    pub fn format_context(&self, context: &QueryContext) -> String {
        self.assignment(context)
            .iter()
            .map(|(a, v)| format!("{a}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn full_answer_set(&self) -> AnswerSet {
        AnswerSet::from_bits(((1u64 << self.candidates.len()) - 1) as u32)
    }

    /// All `2^|A|` subsets ordered by size, then lexicographically by candidate position.
    pub fn subsets(&self) -> Vec<AnswerSet> {
        let mut all: Vec<AnswerSet> = (0..1u32 << self.candidates.len()).map(AnswerSet::from_bits).collect();
        all.sort();
        all
    }

    pub fn answer_set<'a, I: IntoIterator<Item = &'a str>>(&self, ids: I) -> Result<AnswerSet> {
        ids.into_iter().try_fold(AnswerSet::EMPTY, |acc, id| {
            self.candidate_index(id)
                .map(|i| acc.with(i))
                .ok_or_else(|| Error::UnknownCandidate(id.to_string()))
        })
    }

    pub fn format_answer_set(&self, set: AnswerSet) -> String {
        let ids: Vec<&str> = set.indices().map(|i| self.candidates[i].id()).collect();
        format!("{{{}}}", ids.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(attrs: Vec<(&str, Vec<&str>)>, ncand: usize) -> Universe {
        let candidates = (0..ncand)
            .map(|i| {
                Candidate::with_rdata(format!("a{}", i + 1), RrType::A, 60, vec![vec![10, 0, 0, i as u8]]).unwrap()
            })
            .collect();
        Universe::new(AttributeSchema::new(attrs).unwrap(), candidates).unwrap()
    }

    #[test]
    fn single_attribute_enumeration() {
        let u = u(vec![("region", vec!["NA", "EU"])], 1);
        let names: Vec<String> = u.enumerate_contexts().iter().map(|c| u.format_context(c)).collect();
        assert_eq!(names, ["region=NA", "region=EU"]);
    }

    #[test]
    fn two_attribute_enumeration_is_lexicographic() {
        let u = u(vec![("region", vec!["NA", "EU"]), ("qtype", vec!["A", "AAAA"])], 1);
        let names: Vec<String> = u.enumerate_contexts().iter().map(|c| u.format_context(c)).collect();
        assert_eq!(
            names,
            [
                "region=NA qtype=A",
                "region=NA qtype=AAAA",
                "region=EU qtype=A",
                "region=EU qtype=AAAA"
            ]
        );
        for (i, c) in u.enumerate_contexts().iter().enumerate() {
            assert_eq!(u.context_index(c).unwrap(), i);
        }
    }

    #[test]
    fn subsets_of_one_and_two() {
        let one = u(vec![("r", vec!["x"])], 1);
        assert_eq!(one.subsets(), [AnswerSet::EMPTY, AnswerSet::singleton(0)]);
        let two = u(vec![("r", vec!["x"])], 2);
        let shown: Vec<String> = two.subsets().into_iter().map(|s| two.format_answer_set(s)).collect();
        assert_eq!(shown, ["{}", "{a1}", "{a2}", "{a1, a2}"]);
    }

    #[test]
    fn subsets_of_eight_count_and_order() {
        let eight = u(vec![("r", vec!["x"])], 8);
        let subsets = eight.subsets();
        assert_eq!(subsets.len(), 1 << 8);
        // size-major, then lexicographic over sorted positions
        for pair in subsets.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let (ia, ib): (Vec<usize>, Vec<usize>) = (a.indices().collect(), b.indices().collect());
            assert!(ia.len() < ib.len() || (ia.len() == ib.len() && ia < ib));
        }
        for i in 0..8 {
            let with: usize = subsets.iter().filter(|s| s.contains(i)).count();
            assert_eq!(with, 128);
        }
    }

    #[test]
    fn caps_are_enforced() {
        let schema = AttributeSchema::new(vec![("r", vec!["x"])]).unwrap();
        let candidates: Vec<Candidate> = (0..9)
            .map(|i| Candidate::with_rdata(format!("c{i}"), RrType::A, 1, vec![vec![0; 4]]).unwrap())
            .collect();
        assert!(matches!(
            Universe::new(schema.clone(), candidates.clone()),
            Err(Error::CapExceeded { what: "candidate", .. })
        ));
        let limits = Limits {
            max_candidates: 9,
            ..Limits::default()
        };
        assert!(Universe::with_limits(schema, candidates, limits).is_ok());

        let values: Vec<String> = (0..300).map(|i| format!("v{i}")).collect();
        let wide = AttributeSchema::new(vec![("a", values.clone()), ("b", values)]).unwrap();
        assert!(matches!(
            Universe::new(wide, vec![]),
            Err(Error::CapExceeded {
                what: "context",
                actual: 90000,
                ..
            })
        ));
    }

    #[test]
    fn rejects_incoherent_rrsets() {
        let mixed_ttl = vec![
            Record {
                rdata: vec![1, 2, 3, 4],
                rrtype: RrType::A,
                ttl: 30,
            },
            Record {
                rdata: vec![1, 2, 3, 5],
                rrtype: RrType::A,
                ttl: 60,
            },
        ];
        assert!(Candidate::new("a", mixed_ttl, Metadata::default()).is_err());
        let mixed_type = vec![
            Record {
                rdata: vec![1, 2, 3, 4],
                rrtype: RrType::A,
                ttl: 30,
            },
            Record {
                rdata: vec![0; 16],
                rrtype: RrType::Aaaa,
                ttl: 30,
            },
        ];
        assert!(Candidate::new("a", mixed_type, Metadata::default()).is_err());
        assert!(Candidate::new("a", vec![], Metadata::default()).is_err());
    }

    #[test]
    fn schema_validation() {
        assert!(AttributeSchema::new(vec![("a", vec!["x"]), ("a", vec!["y"])]).is_err());
        assert!(AttributeSchema::new(vec![("a", Vec::<&str>::new())]).is_err());
        assert!(AttributeSchema::new(vec![("not", vec!["x"])]).is_err());
        assert!(AttributeSchema::new(vec![("a", vec!["x", "x"])]).is_err());
    }

    #[test]
    fn parse_context_requires_total_assignment() {
        let u = u(vec![("region", vec!["NA", "EU"]), ("qtype", vec!["A", "AAAA"])], 1);
        let c = u.parse_context("region=EU,qtype=A").unwrap();
        assert_eq!(u.context_index(&c).unwrap(), 2);
        assert!(u.parse_context("region=EU").is_err());
        assert!(matches!(
            u.parse_context("region=XX qtype=A"),
            Err(Error::UnknownValue { .. })
        ));
    }
}
