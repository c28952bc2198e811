//! Threaded executor for the full parallel algorithm: each sub-round's
//! proposal and priority draws fan out across worker threads. Because
//! every draw is independently keyed, the result is bit-identical to the
//! single-threaded simulation (asserted in tests).

use lllmt_core::model::Instance;
use lllmt_core::parallel::{run_full_with, sub_round_draw, ParallelResult};
use rayon::prelude::*;

pub fn run_full_threaded(instance: &Instance, seed: u64, max_rounds: u64) -> ParallelResult {
    run_full_with(
        instance,
        seed,
        max_rounds,
        |inst, seed, round, sub, events| {
            events
                .par_iter()
                .map(|&b| sub_round_draw(inst, seed, round, sub, b))
                .collect()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use lllmt_core::parallel::run_full;
    use lllmt_core::rng::derive_seed;

    #[test]
    fn threaded_traces_are_bit_identical() {
        for i in 0..10u64 {
            let (inst, _, _) = gen::slack_family_instance(derive_seed(3, 1, i), 0.5);
            for s in 0..5u64 {
                let seed = derive_seed(3, 2, i * 10 + s);
                let serial = run_full(&inst, seed, 10_000);
                let threaded = run_full_threaded(&inst, seed, 10_000);
                assert_eq!(serial.assignment, threaded.assignment);
                assert_eq!(serial.trace.sub_rounds, threaded.trace.sub_rounds);
                assert_eq!(serial.trace.rounds, threaded.trace.rounds);
            }
        }
    }
}
