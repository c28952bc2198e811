use lllmt_core::model::{event_prob, terms_disagree, terms_share_var, VariableSpace};
use proptest::prelude::*;

/// Sorted terms with distinct variables over `n` two-to-four valued vars.
fn atomic_terms(n: u32) -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::btree_map(0..n, 0..2u32, 1..=5)
        .prop_map(|m| m.into_iter().collect::<Vec<_>>())
}

proptest! {
    #[test]
    fn disagreement_is_symmetric_and_irreflexive(
        a in atomic_terms(8),
        b in atomic_terms(8),
    ) {
        prop_assert_eq!(terms_disagree(&a, &b), terms_disagree(&b, &a));
        prop_assert!(!terms_disagree(&a, &a));
        // disagreement implies a shared variable
        if terms_disagree(&a, &b) {
            prop_assert!(terms_share_var(&a, &b));
        }
    }

    #[test]
    fn event_prob_is_a_probability(terms in atomic_terms(8)) {
        let space = VariableSpace::uniform(8, 2);
        let p = event_prob(&terms, &space).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        // product measure: each binary term halves the mass
        let expect = 0.5f64.powi(terms.len() as i32);
        prop_assert!((p - expect).abs() < 1e-12);
    }
}
