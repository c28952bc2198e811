//! Witness-tree invariants fuzzed over random instance families: every
//! tree built from every log of real runs satisfies the structural
//! invariants, the forward replay agrees, and trees are pairwise distinct.

use lllmt::gen;
use lllmt_core::rng::derive_seed;
use lllmt_core::sequential::{run, LowestIdRule, RandomTrueRule};
use lllmt_core::witness::{verify_log, TreeBuilder};

#[test]
fn invariants_hold_on_random_instances() {
    for i in 0..60u64 {
        let inst = gen::small_instance(derive_seed(31, 1, i), 8, 5);
        for sj in 0..4u64 {
            let s = derive_seed(31, 2, i * 100 + sj);
            let res = run(&inst, &mut LowestIdRule, s, 2_000).unwrap();
            if !res.stats.terminated {
                continue; // unconstrained generator: some instances are unsatisfiable
            }
            verify_log(&res.log, &inst).unwrap();
            let mut builder = TreeBuilder::new(&inst);
            for t in 1..=res.log.entries.len() {
                let tree = builder.build(&res.log, t, 1).unwrap().unwrap();
                tree.check_invariants(&inst).unwrap();
            }
        }
    }
}

#[test]
fn invariants_hold_on_skewed_instances_and_random_rule() {
    for i in 0..25u64 {
        let (inst, _, _) = gen::skewed_family_instance(derive_seed(32, 1, i), 0.5);
        for sj in 0..3u64 {
            let s = derive_seed(32, 2, i * 100 + sj);
            let res = run(&inst, &mut RandomTrueRule { seed: s }, s, 10_000).unwrap();
            assert!(res.stats.terminated, "criterion-satisfying instance must solve");
            verify_log(&res.log, &inst).unwrap();
        }
    }
}

#[test]
fn hybrid_logs_replay_cleanly() {
    use lllmt_core::parallel::run_hybrid;
    for i in 0..25u64 {
        let (inst, _, _) = gen::slack_family_instance(derive_seed(33, 1, i), 0.5);
        let hybrid = run_hybrid(&inst, derive_seed(33, 2, i), 10_000);
        assert!(hybrid.trace.terminated);
        hybrid.log.validate(&inst).unwrap();
        verify_log(&hybrid.log, &inst).unwrap();
    }
}
