//! Turning a policy's distribution at one context into a concrete response.

use std::fmt;

use num_bigint::{BigInt, RandBigInt};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Evaluate, ObservableRow};
use crate::error::Result;
use crate::universe::{AnswerSet, Candidate, QueryContext};
use crate::wire::{encode_rrsets, Question};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServeMode {
    /// Most probable answer set; ties go to the earlier set in subset order.
    Deterministic,
    /// One exact draw from a generator seeded with the given value.
    Sample(u64),
}

impl fmt::Display for ServeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ServeMode::Deterministic => f.write_str("deterministic"),
            ServeMode::Sample(seed) => write!(f, "sample({seed})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServedResponse {
    pub context: QueryContext,
    pub answer: AnswerSet,
    /// Whole candidates for `answer`, in candidate order.
    pub rrsets: Vec<Candidate>,
    /// Smallest TTL among the served RRsets; 0 for an empty answer.
    pub ttl: u32,
    pub truncated: bool,
    /// Answer sets that made it onto the wire.
    pub on_wire: AnswerSet,
    pub wire: Vec<u8>,
    pub empty: bool,
    pub steps: usize,
}

/// Serves `policy` at `context` and encodes the response for `question`.
pub fn serve<P: Evaluate + ?Sized>(
    policy: &P,
    context: &QueryContext,
    mode: ServeMode,
    question: &Question,
) -> Result<ServedResponse> {
    let (outcome, steps) = evaluate(policy, context)?;
    let answer = match mode {
        ServeMode::Deterministic => most_probable(&outcome),
        ServeMode::Sample(seed) => draw(&outcome, &mut ChaCha8Rng::seed_from_u64(seed)),
    };
    respond(policy, context, answer, outcome.is_empty(), steps, question)
}

fn evaluate<P: Evaluate + ?Sized>(policy: &P, context: &QueryContext) -> Result<(ObservableRow, usize)> {
    let index = policy.universe().context_index(context)?;
    let evaluation = policy.evaluate(index);
    Ok((ObservableRow::of(&evaluation.row), evaluation.steps))
}

fn respond<P: Evaluate + ?Sized>(
    policy: &P,
    context: &QueryContext,
    answer: AnswerSet,
    empty: bool,
    steps: usize,
    question: &Question,
) -> Result<ServedResponse> {
    let universe = policy.universe();
    let rrsets: Vec<Candidate> = answer.indices().map(|i| universe.candidates()[i].clone()).collect();
    let refs: Vec<&Candidate> = rrsets.iter().collect();
    let encoded = encode_rrsets(question, &refs)?;
    let on_wire = AnswerSet::from_indices(
        encoded
            .kept
            .iter()
            .map(|&k| answer.indices().nth(k).expect("kept index")),
    );
    let ttl = rrsets.iter().map(Candidate::ttl).min().unwrap_or(0);
    Ok(ServedResponse {
        context: context.clone(),
        answer,
        ttl,
        truncated: encoded.truncated,
        on_wire,
        wire: encoded.bytes,
        empty: empty || answer.is_empty(),
        steps,
        rrsets,
    })
}

pub fn most_probable(outcome: &ObservableRow) -> AnswerSet {
    match outcome {
        ObservableRow::Empty => AnswerSet::EMPTY,
        // iteration follows subset order, so the first maximum wins ties
        ObservableRow::Distribution(d) => {
            let mut best: Option<(AnswerSet, &crate::rational::Weight)> = None;
            for (s, w) in d {
                if best.is_none_or(|(_, b)| w > b) {
                    best = Some((*s, w));
                }
            }
            best.map(|(s, _)| s).unwrap_or(AnswerSet::EMPTY)
        }
    }
}

/// Exact draw: a uniform integer below the product of the denominators picks
/// the answer set whose cumulative interval contains it.
pub fn draw<R: rand::Rng + ?Sized>(outcome: &ObservableRow, rng: &mut R) -> AnswerSet {
    let ObservableRow::Distribution(d) = outcome else {
        return AnswerSet::EMPTY;
    };
    let scale: BigInt = d.values().map(|w| w.denom().clone()).product();
    let ticket = rng.gen_bigint_range(&BigInt::zero(), &scale);
    let mut upper = BigInt::zero();
    for (s, w) in d {
        upper += w.numer() * (&scale / w.denom());
        if ticket < upper {
            return *s;
        }
    }
    *d.keys().last().expect("nonempty distribution")
}

/// A stream of seeded draws for one policy and context.
pub struct ResponseSampler<'a, P: Evaluate + ?Sized> {
    policy: &'a P,
    context: QueryContext,
    outcome: ObservableRow,
    steps: usize,
    rng: ChaCha8Rng,
}

impl<'a, P: Evaluate + ?Sized> ResponseSampler<'a, P> {
    pub fn new(policy: &'a P, context: &QueryContext, seed: u64) -> Result<Self> {
        let (outcome, steps) = evaluate(policy, context)?;
        Ok(ResponseSampler {
            policy,
            context: context.clone(),
            outcome,
            steps,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn next_answer(&mut self) -> AnswerSet {
        draw(&self.outcome, &mut self.rng)
    }

    pub fn next_response(&mut self, question: &Question) -> Result<ServedResponse> {
        let answer = self.next_answer();
        respond(
            self.policy,
            &self.context,
            answer,
            self.outcome.is_empty(),
            self.steps,
            question,
        )
    }
}

/// Anything that answers queries; the cache check runs against this.
pub trait Responder {
    fn respond(&mut self, context: &QueryContext, question: &Question) -> Result<ServedResponse>;
}

/// Deterministic serving of a policy.
pub struct PolicyResponder<'a, P: Evaluate + ?Sized> {
    pub policy: &'a P,
}

impl<P: Evaluate + ?Sized> Responder for PolicyResponder<'_, P> {
    fn respond(&mut self, context: &QueryContext, question: &Question) -> Result<ServedResponse> {
        serve(self.policy, context, ServeMode::Deterministic, question)
    }
}

#[derive(Debug, Clone)]
pub struct CacheProbe {
    pub context: QueryContext,
    pub window: u32,
    pub observations: Vec<ServedResponse>,
    /// 1-based repeat at which the wire bytes first differed from the first response.
    pub divergence: Option<usize>,
}

impl CacheProbe {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

/// Queries `repeats` times within one cache window and compares the wire bytes.
pub fn cache_consistency_check<R: Responder + ?Sized>(
    responder: &mut R,
    context: &QueryContext,
    question: &Question,
    window: u32,
    repeats: usize,
) -> Result<CacheProbe> {
    let mut observations: Vec<ServedResponse> = Vec::with_capacity(repeats);
    let mut divergence = None;
    for n in 1..=repeats {
        let response = responder.respond(context, question)?;
        if divergence.is_none() && observations.first().is_some_and(|first| first.wire != response.wire) {
            divergence = Some(n);
        }
        observations.push(response);
    }
    Ok(CacheProbe {
        context: context.clone(),
        window,
        observations,
        divergence,
    })
}

/// Serves every context of the policy's universe deterministically; a convenience
/// for totality checks.
pub fn serve_all<P: Evaluate + ?Sized>(policy: &P, question: &Question) -> Result<Vec<ServedResponse>> {
    policy
        .universe()
        .enumerate_contexts()
        .iter()
        .map(|c| serve(policy, c, ServeMode::Deterministic, question))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{Behavior, Policy};
    use crate::error::Error;
    use crate::fixtures::{p_geo, p_geo_term, p_w, u0, u0_with_health};
    use crate::rational::integer;
    use crate::universe::RrType;

    fn q() -> Question {
        Question::new("svc.example.com", RrType::A)
    }

    #[test]
    fn zero_serves_empty() {
        let u = u0();
        for c in u.enumerate_contexts() {
            let r = serve(&Behavior::zero(&u), &c, ServeMode::Deterministic, &q()).unwrap();
            assert!(r.empty);
            assert!(r.rrsets.is_empty());
            assert_eq!(r.ttl, 0);
            assert_eq!(r.wire.len(), 33);
        }
    }

    #[test]
    fn p_geo_in_na_serves_a1() {
        let u = u0();
        let c = u.parse_context("region=NA qtype=A").unwrap();
        let r = serve(&p_geo(&u), &c, ServeMode::Deterministic, &q()).unwrap();
        assert_eq!(r.answer, AnswerSet::singleton(0));
        assert_eq!(r.rrsets[0].id(), "a1");
        assert_eq!(r.ttl, 300);
        assert_eq!(r.wire.len(), 33 + 31);
        let policy = Policy::new(u.clone(), p_geo_term()).unwrap();
        let via_term = serve(&policy, &c, ServeMode::Deterministic, &q()).unwrap();
        assert_eq!(via_term.wire, r.wire);
        assert!(via_term.steps <= policy.step_bound());
    }

    #[test]
    fn deterministic_mode_breaks_ties_by_subset_order() {
        let u = u0();
        let even = Behavior::weighted(
            &u,
            [
                (AnswerSet::singleton(1), integer(1)),
                (AnswerSet::singleton(0), integer(1)),
            ],
        )
        .unwrap();
        let c = u.context_at(0);
        assert_eq!(
            serve(&even, &c, ServeMode::Deterministic, &q()).unwrap().answer,
            AnswerSet::singleton(0)
        );
        assert_eq!(
            serve(&p_w(&u), &c, ServeMode::Deterministic, &q()).unwrap().answer,
            AnswerSet::singleton(1)
        );
    }

    #[test]
    fn sampling_is_seeded() {
        let u = u0();
        let c = u.context_at(0);
        let a = serve(&p_w(&u), &c, ServeMode::Sample(7), &q()).unwrap();
        let b = serve(&p_w(&u), &c, ServeMode::Sample(7), &q()).unwrap();
        assert_eq!(a, b);
        let f = p_w(&u);
        let mut s1 = ResponseSampler::new(&f, &c, 1).unwrap();
        let mut s2 = ResponseSampler::new(&f, &c, 1).unwrap();
        let draws: Vec<_> = (0..50).map(|_| s1.next_answer()).collect();
        assert_eq!(draws, (0..50).map(|_| s2.next_answer()).collect::<Vec<_>>());
        assert!(draws.contains(&AnswerSet::singleton(0)) && draws.contains(&AnswerSet::singleton(1)));
    }

    #[test]
    fn outside_context_is_an_error() {
        let u = u0();
        let other = Arc::new(crate::fixtures::universe_with(&[("zone", &["x", "y", "z"])], 1));
        let c = other.context_at(2);
        assert!(matches!(
            serve(&p_w(&u), &c, ServeMode::Deterministic, &q()),
            Err(Error::ContextOutsideUniverse)
        ));
    }

    #[test]
    fn priority_skips_down_candidates() {
        let u = u0_with_health(&[false, true]);
        let f = Behavior::priority(&u, &[0, 1]).unwrap();
        let r = serve(&f, &u.context_at(0), ServeMode::Deterministic, &q()).unwrap();
        assert_eq!(r.answer, AnswerSet::singleton(1));
    }

    struct Flaky<'a> {
        inner: PolicyResponder<'a, Behavior>,
        calls: usize,
    }

    impl Responder for Flaky<'_> {
        fn respond(&mut self, context: &QueryContext, question: &Question) -> Result<ServedResponse> {
            self.calls += 1;
            let mut r = self.inner.respond(context, question)?;
            if self.calls > 1 {
                r.wire[0] = self.calls as u8;
            }
            Ok(r)
        }
    }

    #[test]
    fn cache_check_passes_pure_and_catches_stateful() {
        let u = u0();
        let f = p_w(&u);
        let c = u.context_at(1);
        let probe = cache_consistency_check(&mut PolicyResponder { policy: &f }, &c, &q(), 300, 100).unwrap();
        assert!(probe.passed());
        assert_eq!(probe.observations.len(), 100);
        let zero = Behavior::zero(&u);
        assert!(
            cache_consistency_check(&mut PolicyResponder { policy: &zero }, &c, &q(), 300, 1)
                .unwrap()
                .passed()
        );
        let mut flaky = Flaky {
            inner: PolicyResponder { policy: &f },
            calls: 0,
        };
        let probe = cache_consistency_check(&mut flaky, &c, &q(), 300, 10).unwrap();
        assert_eq!(probe.divergence, Some(2));
    }

    #[test]
    fn serve_all_covers_every_context() {
        let u = u0();
        assert_eq!(serve_all(&p_geo(&u), &q()).unwrap().len(), 4);
    }
}
