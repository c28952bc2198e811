//! The sequential resampling algorithm with execution-log instrumentation.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::criteria::{enumerate_orderable_sets_for_terms, MuVector};
use crate::error::{CriterionError, RunError};
use crate::model::{event_prob, terms_disagree, Assignment, Instance};
use crate::rng::{derive_seed, purpose, stream};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// Picks which true event to resample next.
///
/// The choice must depend only on the prior state of the run (the arguments
/// given), never on values yet to be drawn.
pub trait ResampleRule {
    fn select(
        &mut self,
        assignment: &Assignment,
        true_events: &BTreeSet<usize>,
        step: u64,
    ) -> usize;
}

/// Deterministic default: the lowest-id true event.
#[derive(Clone, Copy, Debug, Default)]
pub struct LowestIdRule;

impl ResampleRule for LowestIdRule {
    fn select(&mut self, _a: &Assignment, true_events: &BTreeSet<usize>, _step: u64) -> usize {
        *true_events
            .iter()
            .next()
            .expect("rule called with no true events")
    }
}

/// Uniform choice among true events, drawn from the dedicated `RULE` stream
/// keyed by step, so it is consumed independently of the resampling stream.
#[derive(Clone, Copy, Debug)]
pub struct RandomTrueRule {
    pub seed: u64,
}

impl ResampleRule for RandomTrueRule {
    fn select(&mut self, _a: &Assignment, true_events: &BTreeSet<usize>, step: u64) -> usize {
        let k = stream(self.seed, &[purpose::RULE, step]).next_below(true_events.len() as u64);
        *true_events.iter().nth(k as usize).expect("nonempty")
    }
}

/// One resampling: the step counter, the event, and the fresh values drawn
/// for its variables (sorted by variable).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub step: u64,
    pub event: usize,
    pub values: Vec<(u32, u32)>,
}

/// Initial assignment plus the ordered resamplings; replaying the entries
/// from the initial assignment reproduces every intermediate state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionLog {
    pub initial: Assignment,
    pub entries: Vec<LogEntry>,
}

impl ExecutionLog {
    pub fn steps(&self) -> usize {
        self.entries.len()
    }

    /// Assignment at time `t` (1-based): before entry `t` is applied.
    pub fn state_at(&self, t: usize) -> Assignment {
        let mut a = self.initial.clone();
        for entry in self.entries.iter().take(t.saturating_sub(1)) {
            for &(var, val) in &entry.values {
                a.set(var as usize, val);
            }
        }
        a
    }

    pub fn final_assignment(&self) -> Assignment {
        self.state_at(self.entries.len() + 1)
    }

    /// Check the log invariant: each logged event was true under the
    /// pre-step assignment and its values cover exactly its variables.
    pub fn validate(&self, instance: &Instance) -> Result<(), RunError> {
        let mut a = self.initial.clone();
        for entry in &self.entries {
            let ev = instance.event(entry.event);
            if !ev.is_true(&a) {
                return Err(RunError::Precondition(format!(
                    "logged event {} is not true at step {}",
                    entry.event, entry.step
                )));
            }
            let vars: Vec<u32> = entry.values.iter().map(|&(v, _)| v).collect();
            let expect: Vec<u32> = ev.terms().iter().map(|&(v, _)| v).collect();
            if vars != expect {
                return Err(RunError::Precondition(format!(
                    "step {} resampled variables do not match event {}",
                    entry.step, entry.event
                )));
            }
            for &(var, val) in &entry.values {
                a.set(var as usize, val);
            }
        }
        Ok(())
    }
}

/// Resampling counts and termination for one run.
#[derive(Clone, Debug)]
pub struct RunStats {
    pub steps: u64,
    pub resamples: Vec<u64>,
    pub terminated: bool,
    /// Filled by callers that time the run; the core itself has no clock.
    pub wall_seconds: f64,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub assignment: Assignment,
    pub log: ExecutionLog,
    pub stats: RunStats,
}

/// Incremental index from variables to the events they satisfy, so truth
/// detection never rescans all events.
#[derive(Clone, Debug)]
pub struct TruthTracker {
    satisfied: Vec<u32>,
    true_set: BTreeSet<usize>,
}

impl TruthTracker {
    pub fn new(instance: &Instance, a: &Assignment) -> Self {
        let mut satisfied = vec![0u32; instance.event_count()];
        let mut true_set = BTreeSet::new();
        for ev in instance.events() {
            let sat = ev
                .terms()
                .iter()
                .filter(|&&(v, j)| a.get(v as usize) == j)
                .count() as u32;
            satisfied[ev.id()] = sat;
            if sat as usize == ev.len() {
                true_set.insert(ev.id());
            }
        }
        TruthTracker {
            satisfied,
            true_set,
        }
    }

    pub fn true_set(&self) -> &BTreeSet<usize> {
        &self.true_set
    }

    pub fn is_true(&self, event: usize) -> bool {
        self.true_set.contains(&event)
    }

    /// Record that `var` changed from `old` to `new`.
    pub fn apply(&mut self, instance: &Instance, var: u32, old: u32, new: u32) {
        if old == new {
            return;
        }
        for &e in instance.events_containing(var, old) {
            let full = instance.event(e).len() as u32;
            if self.satisfied[e] == full {
                self.true_set.remove(&e);
            }
            self.satisfied[e] -= 1;
        }
        for &e in instance.events_containing(var, new) {
            self.satisfied[e] += 1;
            if self.satisfied[e] == instance.event(e).len() as u32 {
                self.true_set.insert(e);
            }
        }
    }
}

/// Run the resampling algorithm: draw an initial assignment from the
/// product measure, then repeatedly redraw the variables of the rule's
/// chosen true event until none is true or `max_steps` is hit.
///
/// Fully deterministic given `seed`; `stats.terminated` is false when the
/// step budget ran out (the log is still returned for inspection).
pub fn run(
    instance: &Instance,
    rule: &mut dyn ResampleRule,
    seed: u64,
    max_steps: u64,
) -> Result<RunResult, RunError> {
    let mut a = instance.space().sample_assignment(seed);
    let initial = a.clone();
    let mut tracker = TruthTracker::new(instance, &a);
    let mut entries = Vec::new();
    let mut resamples = vec![0u64; instance.event_count()];
    let mut steps = 0u64;
    let mut terminated = false;

    while steps < max_steps {
        if tracker.true_set().is_empty() {
            terminated = true;
            break;
        }
        let step = steps + 1;
        let chosen = rule.select(&a, tracker.true_set(), step);
        if chosen >= instance.event_count() || !tracker.is_true(chosen) {
            return Err(RunError::RuleContract {
                step,
                event: chosen,
            });
        }
        let mut values = Vec::with_capacity(instance.event(chosen).len());
        for &(var, _) in instance.event(chosen).terms() {
            let new = stream(seed, &[purpose::RESAMPLE, step, var as u64])
                .sample(instance.space().probs_of(var as usize));
            let old = a.get(var as usize);
            a.set(var as usize, new);
            tracker.apply(instance, var, old, new);
            values.push((var, new));
        }
        entries.push(LogEntry {
            step,
            event: chosen,
            values,
        });
        resamples[chosen] += 1;
        steps = step;
    }
    if tracker.true_set().is_empty() {
        terminated = true;
    }

    Ok(RunResult {
        assignment: a,
        log: ExecutionLog { initial, entries },
        stats: RunStats {
            steps,
            resamples,
            terminated,
            wall_seconds: 0.0,
        },
    })
}

/// Empirical terminal-state frequency of an external atomic event against
/// the orderable-set bound on the terminal distribution.
#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub frequency: f64,
    pub bound: f64,
    pub runs: u64,
    pub non_terminated: u64,
}

/// Run the algorithm `runs` times with derived seeds and report the
/// fraction of terminal assignments satisfying `target`, plus the bound
/// `P(E) * sum over sets orderable to E of prod mu`.
///
/// `target` must be atomic over the instance's variables and must not be a
/// bad-event of the instance.
pub fn estimate_event_probability(
    instance: &Instance,
    mu: &MuVector,
    target: &[(u32, u32)],
    runs: u64,
    seed: u64,
    max_steps: u64,
) -> Result<EstimateReport, RunError> {
    if mu.len() != instance.event_count() {
        return Err(CriterionError::MuLengthMismatch {
            expected: instance.event_count(),
            got: mu.len(),
        }
        .into());
    }
    let mut terms = target.to_vec();
    terms.sort_unstable();
    for w in terms.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(RunError::Precondition(format!(
                "target demands two values for variable {}",
                w[0].0
            )));
        }
    }
    if terms.is_empty() {
        return Err(RunError::Precondition("target event is empty".into()));
    }
    for ev in instance.events() {
        if ev.terms() == terms.as_slice() {
            return Err(RunError::Precondition(format!(
                "target coincides with bad-event {}",
                ev.id()
            )));
        }
    }
    let p = event_prob(&terms, instance.space())?;
    // Self-check the disagreement helper stays consistent with enumeration.
    debug_assert!(!terms_disagree(&terms, &terms));

    let sets =
        enumerate_orderable_sets_for_terms(instance, &terms, crate::criteria::DEFAULT_ENUM_CAP)?;
    let mut bound = 0.0f64;
    for set in &sets {
        let mut prod = 1.0f64;
        for &b in set {
            prod *= mu.get(b);
        }
        bound += prod;
    }
    bound *= p;

    let mut hits = 0u64;
    let mut non_terminated = 0u64;
    for r in 0..runs {
        let run_seed = derive_seed(seed, 1, r);
        let mut rule = LowestIdRule;
        let result = run(instance, &mut rule, run_seed, max_steps)?;
        if !result.stats.terminated {
            non_terminated += 1;
            continue;
        }
        if terms
            .iter()
            .all(|&(v, j)| result.assignment.get(v as usize) == j)
        {
            hits += 1;
        }
    }
    Ok(EstimateReport {
        frequency: hits as f64 / runs as f64,
        bound,
        runs,
        non_terminated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::VariableSpace;
    use alloc::vec;

    fn toy() -> Instance {
        Instance::build(
            VariableSpace::uniform(3, 2),
            vec![vec![(0, 0), (1, 0)], vec![(1, 1), (2, 0)]],
        )
        .unwrap()
    }

    #[test]
    fn no_events_returns_initial() {
        let inst = Instance::build(VariableSpace::uniform(4, 3), vec![]).unwrap();
        let res = run(&inst, &mut LowestIdRule, 5, 100).unwrap();
        assert!(res.stats.terminated);
        assert_eq!(res.stats.steps, 0);
        assert_eq!(res.assignment, res.log.initial);
    }

    #[test]
    fn lone_event_geometric() {
        // Lone event {(0,0)} on a fair bit: terminates with X_0 = 1, and T
        // equals the number of 0-draws produced by the keyed streams before
        // the first 1, which we recompute directly.
        let inst = Instance::build(VariableSpace::uniform(1, 2), vec![vec![(0, 0)]]).unwrap();
        for seed in 0..50u64 {
            let res = run(&inst, &mut LowestIdRule, seed, 10_000).unwrap();
            assert!(res.stats.terminated);
            assert_eq!(res.assignment.get(0), 1);

            let mut expected = 0u64;
            let init = stream(seed, &[purpose::INITIAL, 0]).sample(&[0.5, 0.5]);
            if init == 0 {
                let mut t = 1u64;
                loop {
                    expected += 1;
                    let v = stream(seed, &[purpose::RESAMPLE, t, 0]).sample(&[0.5, 0.5]);
                    if v == 1 {
                        break;
                    }
                    t += 1;
                }
            }
            assert_eq!(res.stats.steps, expected);
        }
    }

    #[test]
    fn complementary_events_never_terminate() {
        let inst = Instance::build(
            VariableSpace::uniform(1, 2),
            vec![vec![(0, 0)], vec![(0, 1)]],
        )
        .unwrap();
        let res = run(&inst, &mut LowestIdRule, 3, 500).unwrap();
        assert!(!res.stats.terminated);
        assert_eq!(res.stats.steps, 500);
        assert_eq!(res.log.entries.len(), 500);
        res.log.validate(&inst).unwrap();
    }

    #[test]
    fn replay_determinism_and_terminal_falsification() {
        let inst = toy();
        for seed in 0..200u64 {
            let a = run(&inst, &mut LowestIdRule, seed, 10_000).unwrap();
            let b = run(&inst, &mut LowestIdRule, seed, 10_000).unwrap();
            assert_eq!(a.log, b.log);
            assert!(a.stats.terminated);
            assert!(inst.true_events(&a.assignment).is_empty());
            assert_eq!(a.log.final_assignment(), a.assignment);
            a.log.validate(&inst).unwrap();
            let total: u64 = a.stats.resamples.iter().sum();
            assert_eq!(total, a.stats.steps);
        }
    }

    #[test]
    fn randomized_rule_is_reproducible() {
        let inst = toy();
        let a = run(&inst, &mut RandomTrueRule { seed: 9 }, 9, 10_000).unwrap();
        let b = run(&inst, &mut RandomTrueRule { seed: 9 }, 9, 10_000).unwrap();
        assert_eq!(a.log, b.log);
        a.log.validate(&inst).unwrap();
    }

    struct BadRule;
    impl ResampleRule for BadRule {
        fn select(&mut self, _a: &Assignment, _t: &BTreeSet<usize>, _s: u64) -> usize {
            1 // claims event 1 regardless of truth
        }
    }

    #[test]
    fn rule_contract_violation_detected() {
        // Seeds where event 1 is false at some step while event 0 is true.
        let inst = toy();
        let mut violated = false;
        for seed in 0..100u64 {
            match run(&inst, &mut BadRule, seed, 1_000) {
                Err(RunError::RuleContract { .. }) => {
                    violated = true;
                    break;
                }
                Ok(_) => {}
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(violated);
    }

    #[test]
    fn estimate_lone_event() {
        // Lone event {(0,0)} on a fair bit, mu = 1; target E = {(0,1)}.
        // Bound = 0.5 (1 + 1) = 1 and the terminal state always has X_0=1.
        let inst = Instance::build(VariableSpace::uniform(1, 2), vec![vec![(0, 0)]]).unwrap();
        let mu = MuVector::uniform(1, 1.0).unwrap();
        let rep = estimate_event_probability(&inst, &mu, &[(0, 1)], 200, 7, 10_000).unwrap();
        assert!((rep.bound - 1.0).abs() < 1e-12);
        assert!((rep.frequency - 1.0).abs() < 1e-12);
        assert_eq!(rep.non_terminated, 0);
    }

    #[test]
    fn estimate_disjoint_target_keeps_product_measure() {
        // Target on variables untouched by any event: bound = P(E) = 0.25
        // and the frequency stays near it.
        let inst =
            Instance::build(VariableSpace::uniform(4, 2), vec![vec![(0, 0), (1, 0)]]).unwrap();
        let mu = MuVector::uniform(1, 0.5).unwrap();
        let runs = 4000;
        let rep =
            estimate_event_probability(&inst, &mu, &[(2, 0), (3, 1)], runs, 11, 10_000).unwrap();
        assert!((rep.bound - 0.25).abs() < 1e-12);
        let sd = (0.25f64 * 0.75 / runs as f64).sqrt();
        assert!(
            (rep.frequency - 0.25).abs() < 4.0 * sd,
            "freq {}",
            rep.frequency
        );
    }

    #[test]
    fn estimate_rejects_existing_event() {
        let inst = toy();
        let mu = MuVector::uniform(2, 0.5).unwrap();
        let err = estimate_event_probability(&inst, &mu, &[(0, 0), (1, 0)], 10, 1, 100);
        assert!(matches!(err, Err(RunError::Precondition(_))));
    }
}
