use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use steerlab::dsl::{parse_policy, print_policy, resolve, ParseOptions, PolicyDocument, PolicyExpr};
use steerlab::fixtures::{p_geo, u0};
use steerlab::generate::{random_term, random_universe};

fn corpus() -> Vec<(std::sync::Arc<steerlab::universe::Universe>, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    (0..50)
        .map(|_| {
            let u = random_universe(&mut rng, 32, 4);
            let term = random_term(&mut rng, &u, 4);
            let doc = PolicyDocument {
                universe_ref: None,
                expr: PolicyExpr::from_term(&term, &u),
            };
            (u, print_policy(&doc))
        })
        .collect()
}

#[test]
fn print_parse_is_a_fixpoint_on_the_corpus() {
    let opts = ParseOptions { extended_algebra: true };
    for (u, text) in corpus() {
        let once = print_policy(&parse_policy(&text, opts).unwrap());
        let twice = print_policy(&parse_policy(&once, opts).unwrap());
        assert_eq!(once, twice);
        let a = resolve(&parse_policy(&text, opts).unwrap(), &u).unwrap().to_behavior();
        let b = resolve(&parse_policy(&once, opts).unwrap(), &u).unwrap().to_behavior();
        assert_eq!(a, b);
    }
}

#[test]
fn merge_of_gates_elaborates_to_p_geo() {
    let u = u0();
    let doc = parse_policy(
        "merge(when region=NA apply fixed{a1}, when region=EU apply fixed{a2})",
        ParseOptions::default(),
    )
    .unwrap();
    let f = resolve(&doc, &u).unwrap().to_behavior();
    assert!(f.equiv(&p_geo(&u)).unwrap().holds());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_policies_round_trip(seed in any::<u64>(), depth in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_universe(&mut rng, 24, 3);
        let term = random_term(&mut rng, &u, depth);
        let doc = PolicyDocument { universe_ref: Some("dir/u.universe".into()), expr: PolicyExpr::from_term(&term, &u) };
        let text = print_policy(&doc);
        let back = parse_policy(&text, ParseOptions { extended_algebra: true }).unwrap();
        prop_assert_eq!(&back.universe_ref, &doc.universe_ref);
        prop_assert_eq!(print_policy(&back), text);
        let original = steerlab::algebra::Policy::new(u.clone(), term).unwrap().to_behavior();
        prop_assert!(original.equiv(&resolve(&back, &u).unwrap().to_behavior()).unwrap().holds());
    }
}
