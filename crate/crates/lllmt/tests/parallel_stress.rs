//! Heavier coupling stress: skewed instances drive capacities above one,
//! shared variables inside selections, conflict edges, and LFMIS drops --
//! the regimes the uniform family rarely reaches. Verifies the full/hybrid
//! coupling and the height property stay exact there, and that the
//! interesting paths actually fire.

use lllmt::gen;
use lllmt_core::parallel::{round_capacities, round_height_check, run_full, run_hybrid};
use lllmt_core::rng::derive_seed;

#[test]
fn skewed_coupling_exercises_conflicts() {
    let mut sub_rounds_with_edges = 0u64;
    let mut sub_rounds_with_drops = 0u64;
    let mut capacity_above_one = false;
    let mut multi_event_selections = 0u64;

    for i in 0..150u64 {
        let (inst, _, _) = gen::skewed_family_instance(derive_seed(77, 1, i), 0.5);
        // capacities above one occur whenever a variable rests on its
        // majority value
        let a = inst.space().sample_assignment(derive_seed(77, 2, i));
        let (_, caps) = round_capacities(&inst, &a);
        capacity_above_one |= caps.iter().any(|&c| c > 1);

        for sj in 0..4u64 {
            let s = derive_seed(77, 3, i * 100 + sj);
            let full = run_full(&inst, s, 10_000);
            let hybrid = run_hybrid(&inst, s, 10_000);
            assert_eq!(
                full.trace.sub_rounds.len(),
                hybrid.trace.sub_rounds.len(),
                "instance {i} seed {sj}"
            );
            for (f, h) in full.trace.sub_rounds.iter().zip(&hybrid.trace.sub_rounds) {
                assert_eq!(f.assignment_after, h.assignment_after, "instance {i} seed {sj}");
                assert_eq!(f.i_prime_size, h.i_prime_size, "instance {i} seed {sj}");
                assert_eq!(f.switched, h.switched, "instance {i} seed {sj}");
                if f.longest_path > 0 {
                    sub_rounds_with_edges += 1;
                }
                if f.i_prime_size < f.i_size {
                    sub_rounds_with_drops += 1;
                }
                if f.i_size > 1 {
                    multi_event_selections += 1;
                }
            }
            assert_eq!(full.assignment, hybrid.assignment);
            if hybrid.trace.terminated {
                round_height_check(&hybrid, &inst).unwrap();
            }
        }
    }
    // the stress family must actually reach the interesting regimes
    assert!(capacity_above_one, "no capacity ever exceeded one");
    assert!(multi_event_selections > 50, "selections stayed trivial");
    assert!(
        sub_rounds_with_edges > 10,
        "conflict graphs stayed edgeless ({sub_rounds_with_edges})"
    );
    assert!(
        sub_rounds_with_drops > 0,
        "the LFMIS never dropped a selected event"
    );
    println!(
        "stress: {} sub-rounds with conflict edges, {} with LFMIS drops, {} multi-event selections",
        sub_rounds_with_edges, sub_rounds_with_drops, multi_event_selections
    );
}
