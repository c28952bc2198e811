//! Simulated parallel resampling: the simplified maximal-disjoint-set
//! algorithm, the full capacitated algorithm with proposal/priority draws
//! and LFMIS conflict resolution, and the sequential hybrid it couples to.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::model::{Assignment, Instance};
use crate::rng::{purpose, stream};
use crate::sequential::{ExecutionLog, LogEntry, TruthTracker};
use crate::vcmep::{vcmep_greedy, CapacitatedHypergraph};
use crate::witness::TreeBuilder;

pub const DEFAULT_MAX_ROUNDS: u64 = 100_000;

/// Threshold below which the simplified algorithm's switching margin
/// `psi = 1 - max p_ij` triggers a warning in the trace.
pub const PSI_WARN: f64 = 1e-9;

/// Per-sub-round trace record; `assignment_after` makes the coupling
/// between the full and hybrid algorithms directly testable.
#[derive(Clone, Debug, PartialEq)]
pub struct SubRoundRecord {
    pub round: u32,
    pub sub: u32,
    pub v_size: usize,
    pub i_size: usize,
    pub i_prime_size: usize,
    pub switched: usize,
    /// Longest directed path (edge count) in the sub-round's conflict graph;
    /// 0 for the simplified algorithm.
    pub longest_path: usize,
    pub assignment_after: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct ParallelTrace {
    pub sub_rounds: Vec<SubRoundRecord>,
    pub rounds: u32,
    pub terminated: bool,
    /// Switching margin `1 - max_{i,j} p_ij` of the instance.
    pub psi: f64,
    pub psi_warning: bool,
}

#[derive(Clone, Debug)]
pub struct ParallelResult {
    pub assignment: Assignment,
    pub trace: ParallelTrace,
}

/// Hybrid run: the parallel trace plus the sequential execution log it
/// produces, with the parallel round index of every resampling.
#[derive(Clone, Debug)]
pub struct HybridResult {
    pub assignment: Assignment,
    pub trace: ParallelTrace,
    pub log: ExecutionLog,
    pub entry_rounds: Vec<u32>,
}

/// Proposals and priority for one selected event in one sub-round.
#[derive(Clone, Debug, PartialEq)]
pub struct EventDraw {
    pub event: usize,
    /// Fresh value per variable of the event, sorted by variable.
    pub proposals: Vec<(u32, u32)>,
    pub rho: f64,
}

/// Draw the proposals `x_{B,i}` and priority `rho(B)` for `event` in
/// sub-round `(round, sub)`. Pure in all arguments: the full and hybrid
/// algorithms call it with identical keys, and a threaded executor may
/// evaluate events in any order.
pub fn sub_round_draw(
    instance: &Instance,
    seed: u64,
    round: u64,
    sub: u64,
    event: usize,
) -> EventDraw {
    let ev = instance.event(event);
    let proposals = ev
        .terms()
        .iter()
        .map(|&(var, _)| {
            let val = stream(
                seed,
                &[purpose::PROPOSAL, round, sub, event as u64, var as u64],
            )
            .sample(instance.space().probs_of(var as usize));
            (var, val)
        })
        .collect();
    let rho = stream(seed, &[purpose::PRIORITY, round, sub, event as u64]).next_f64();
    EventDraw {
        event,
        proposals,
        rho,
    }
}

/// Per-variable switching probabilities and capacities for one round:
/// `q_i = P(X_i != a_i)` and `C_i = ceil(1/(M q_i))`, capped at the number
/// of events (and at least 1); a variable whose whole mass sits on `a_i`
/// can never switch, so its capacity is immaterial and set to the cap.
pub fn round_capacities(instance: &Instance, a: &Assignment) -> (Vec<f64>, Vec<u32>) {
    let m_cap = instance.event_count().max(1) as u32;
    let big_m = instance.max_event_size().max(1) as f64;
    let mut q = Vec::with_capacity(instance.var_count());
    let mut c = Vec::with_capacity(instance.var_count());
    for i in 0..instance.var_count() {
        let qi = 1.0 - instance.space().prob(i, a.get(i));
        q.push(qi);
        if qi <= 0.0 {
            c.push(m_cap);
        } else {
            let raw = math::ceil(1.0 / (big_m * qi));
            let capped = if raw >= m_cap as f64 {
                m_cap
            } else {
                (raw as u32).max(1)
            };
            c.push(capped);
        }
    }
    (q, c)
}

/// Conflict graph over the selected events of one sub-round: an edge runs
/// from the lower-priority event to the higher one whenever they share a
/// variable the lower one proposes to switch. Acyclic by construction
/// (edges increase in `(rho, id)`; float ties break by event id).
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    pub members: Vec<usize>,
    pub rho: Vec<f64>,
    pub out: Vec<Vec<usize>>,
}

impl ConflictGraph {
    pub fn member_count(&self) -> usize {
        self.members.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|o| o.len()).sum()
    }

    fn precedes(&self, a: usize, b: usize) -> bool {
        (self.rho[a], self.members[a]) < (self.rho[b], self.members[b])
    }

    /// Longest directed path in edges, via DP in priority order.
    pub fn longest_path(&self) -> usize {
        let n = self.members.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            (self.rho[a], self.members[a])
                .partial_cmp(&(self.rho[b], self.members[b]))
                .unwrap()
        });
        let mut dist = vec![0usize; n];
        let mut best = 0;
        for &v in &order {
            for &w in &self.out[v] {
                debug_assert!(self.precedes(v, w));
                dist[w] = dist[w].max(dist[v] + 1);
                best = best.max(dist[w]);
            }
        }
        best
    }
}

/// Build the conflict graph from the sub-round draws. `a_round` holds the
/// round-start values the events demand.
pub fn build_conflict_graph(draws: &[EventDraw], a_round: &Assignment) -> ConflictGraph {
    let n_members = draws.len();
    let members: Vec<usize> = draws.iter().map(|d| d.event).collect();
    let rho: Vec<f64> = draws.iter().map(|d| d.rho).collect();
    let mut out = vec![Vec::new(); n_members];
    let precedes = |a: usize, b: usize| (rho[a], members[a]) < (rho[b], members[b]);

    // positions sharing each variable, with the proposal made there
    let mut by_var: alloc::collections::BTreeMap<u32, Vec<(usize, u32)>> =
        alloc::collections::BTreeMap::new();
    for (pos, draw) in draws.iter().enumerate() {
        for &(var, val) in &draw.proposals {
            by_var.entry(var).or_default().push((pos, val));
        }
    }
    for (var, entries) in &by_var {
        for (idx1, &(p1, x1)) in entries.iter().enumerate() {
            for &(p2, x2) in entries.iter().skip(idx1 + 1) {
                let (lo, hi, x_lo) = if precedes(p1, p2) {
                    (p1, p2, x1)
                } else {
                    (p2, p1, x2)
                };
                if x_lo != a_round.get(*var as usize) {
                    out[lo].push(hi);
                }
            }
        }
    }
    for adj in out.iter_mut() {
        adj.sort_unstable();
        adj.dedup();
    }
    ConflictGraph { members, rho, out }
}

/// Result of the greedy source-peeling LFMIS.
#[derive(Clone, Debug)]
pub struct LfmisResult {
    /// Member positions in the independent set, ascending.
    pub selected: Vec<usize>,
    /// Number of peeling iterations performed.
    pub peel_iterations: usize,
}

/// Iterated peeling: take all current source nodes, delete them and their
/// successors, repeat. The output is the lexicographically-first MIS under
/// the priority order.
pub fn lfmis_greedy(g: &ConflictGraph) -> LfmisResult {
    let n = g.member_count();
    let mut alive = vec![true; n];
    let mut indeg = vec![0usize; n];
    for v in 0..n {
        for &w in &g.out[v] {
            indeg[w] += 1;
        }
    }
    let mut selected = Vec::new();
    let mut remaining = n;
    let mut peel_iterations = 0;
    while remaining > 0 {
        peel_iterations += 1;
        let sources: Vec<usize> = (0..n).filter(|&v| alive[v] && indeg[v] == 0).collect();
        debug_assert!(!sources.is_empty(), "conflict graph must be acyclic");
        let mut dead = Vec::new();
        for &s in &sources {
            selected.push(s);
            dead.push(s);
            for &w in &g.out[s] {
                if alive[w] {
                    dead.push(w);
                }
            }
        }
        dead.sort_unstable();
        dead.dedup();
        for &v in &dead {
            if alive[v] {
                alive[v] = false;
                remaining -= 1;
                for &w in &g.out[v] {
                    if alive[w] {
                        indeg[w] = indeg[w].saturating_sub(1);
                    }
                }
            }
        }
    }
    selected.sort_unstable();
    LfmisResult {
        selected,
        peel_iterations,
    }
}

fn psi_of(instance: &Instance) -> (f64, bool) {
    let psi = 1.0 - instance.space().max_prob();
    (psi, psi < PSI_WARN)
}

/// Select the VCMEP of the current sub-round: the true events viewed as a
/// capacitated hypergraph over the variables, packed greedily in event-id
/// order. Shared verbatim by the full and hybrid algorithms.
fn select_vcmep(instance: &Instance, v_set: &[usize], capacities: &[u32]) -> Vec<usize> {
    let edges: Vec<Vec<u32>> = v_set
        .iter()
        .map(|&b| {
            instance
                .event(b)
                .terms()
                .iter()
                .map(|&(var, _)| var)
                .collect()
        })
        .collect();
    let g = CapacitatedHypergraph::new(instance.var_count(), edges, capacities.to_vec())
        .expect("events are validated");
    let order: Vec<usize> = (0..g.edge_count()).collect();
    let packing = vcmep_greedy(&g, &order);
    packing.selected.iter().map(|&idx| v_set[idx]).collect()
}

/// The simplified parallel algorithm: per sub-round, resample a maximal
/// variable-disjoint set of still-true events.
pub fn run_simplified(instance: &Instance, seed: u64, max_rounds: u64) -> ParallelResult {
    let mut a = instance.space().sample_assignment(seed);
    let mut tracker = TruthTracker::new(instance, &a);
    let (psi, psi_warning) = psi_of(instance);
    let mut sub_rounds = Vec::new();
    let mut rounds = 0u32;
    let mut terminated = false;

    for round in 1..=max_rounds {
        if tracker.true_set().is_empty() {
            terminated = true;
            break;
        }
        rounds = round as u32;
        let mut v_set: Vec<usize> = tracker.true_set().iter().copied().collect();
        let mut sub = 0u32;
        while !v_set.is_empty() {
            sub += 1;
            // maximal variable-disjoint subset, greedy by event id
            let mut used = vec![false; instance.var_count()];
            let mut i_set = Vec::new();
            for &b in &v_set {
                let ev = instance.event(b);
                if ev.terms().iter().all(|&(var, _)| !used[var as usize]) {
                    for &(var, _) in ev.terms() {
                        used[var as usize] = true;
                    }
                    i_set.push(b);
                }
            }
            let mut switched = 0usize;
            for &b in &i_set {
                for &(var, _) in instance.event(b).terms() {
                    let new = stream(
                        seed,
                        &[purpose::PROPOSAL, round, sub as u64, b as u64, var as u64],
                    )
                    .sample(instance.space().probs_of(var as usize));
                    let old = a.get(var as usize);
                    if new != old {
                        switched += 1;
                    }
                    a.set(var as usize, new);
                    tracker.apply(instance, var, old, new);
                }
            }
            let v_before = v_set.len();
            v_set.retain(|b| !i_set.contains(b) && tracker.is_true(*b));
            sub_rounds.push(SubRoundRecord {
                round: round as u32,
                sub,
                v_size: v_before,
                i_size: i_set.len(),
                i_prime_size: i_set.len(),
                switched,
                longest_path: 0,
                assignment_after: a.values().to_vec(),
            });
        }
    }
    if tracker.true_set().is_empty() {
        terminated = true;
    }
    ParallelResult {
        assignment: a,
        trace: ParallelTrace {
            sub_rounds,
            rounds,
            terminated,
            psi,
            psi_warning,
        },
    }
}

/// The full parallel algorithm (simulated): capacitated selection,
/// proposal/priority draws, conflict graph, LFMIS, simultaneous switches.
pub fn run_full(instance: &Instance, seed: u64, max_rounds: u64) -> ParallelResult {
    run_full_with(
        instance,
        seed,
        max_rounds,
        |inst, seed, round, sub, events| {
            events
                .iter()
                .map(|&b| sub_round_draw(inst, seed, round, sub, b))
                .collect()
        },
    )
}

/// [`run_full`] with a pluggable per-sub-round draw strategy. The strategy
/// must return one [`EventDraw`] per selected event in the given order;
/// since every draw is keyed, a threaded executor that evaluates them in
/// parallel (preserving output order) reproduces the sequential simulation
/// bit for bit.
pub fn run_full_with<F>(
    instance: &Instance,
    seed: u64,
    max_rounds: u64,
    mut draw_batch: F,
) -> ParallelResult
where
    F: FnMut(&Instance, u64, u64, u64, &[usize]) -> Vec<EventDraw>,
{
    let mut a = instance.space().sample_assignment(seed);
    let mut tracker = TruthTracker::new(instance, &a);
    let (psi, psi_warning) = psi_of(instance);
    let mut sub_rounds = Vec::new();
    let mut rounds = 0u32;
    let mut terminated = false;

    for round in 1..=max_rounds {
        if tracker.true_set().is_empty() {
            terminated = true;
            break;
        }
        rounds = round as u32;
        let a_round = a.clone();
        let (_q, capacities) = round_capacities(instance, &a_round);
        let mut v_set: Vec<usize> = tracker.true_set().iter().copied().collect();
        let mut sub = 0u32;
        while !v_set.is_empty() {
            sub += 1;
            let i_set = select_vcmep(instance, &v_set, &capacities);
            let draws = draw_batch(instance, seed, round, sub as u64, &i_set);
            debug_assert_eq!(draws.len(), i_set.len());
            let graph = build_conflict_graph(&draws, &a_round);
            let longest_path = graph.longest_path();
            let lfmis = lfmis_greedy(&graph);

            // apply switches; at most one selected event proposes a switch
            // per variable by construction of the graph
            let mut switched_vars: Vec<u32> = Vec::new();
            for &pos in &lfmis.selected {
                for &(var, val) in &draws[pos].proposals {
                    if val != a_round.get(var as usize) {
                        debug_assert!(
                            !switched_vars.contains(&var),
                            "two selected events switch variable {var}"
                        );
                        let old = a.get(var as usize);
                        a.set(var as usize, val);
                        tracker.apply(instance, var, old, val);
                        switched_vars.push(var);
                    }
                }
            }
            let v_before = v_set.len();
            v_set.retain(|&b| {
                !i_set.contains(&b)
                    && !instance
                        .event(b)
                        .terms()
                        .iter()
                        .any(|&(var, _)| switched_vars.contains(&var))
            });
            debug_assert!(v_set.iter().all(|&b| tracker.is_true(b)));
            sub_rounds.push(SubRoundRecord {
                round: round as u32,
                sub,
                v_size: v_before,
                i_size: i_set.len(),
                i_prime_size: lfmis.selected.len(),
                switched: switched_vars.len(),
                longest_path,
                assignment_after: a.values().to_vec(),
            });
        }
    }
    if tracker.true_set().is_empty() {
        terminated = true;
    }
    ParallelResult {
        assignment: a,
        trace: ParallelTrace {
            sub_rounds,
            rounds,
            terminated,
            psi,
            psi_warning,
        },
    }
}

/// The sequential hybrid: identical selection and identical keyed draws as
/// [`run_full`], but events are resampled one by one in priority order,
/// skipping any that are no longer true. With a shared seed its
/// per-sub-round variable states match the full algorithm's exactly.
pub fn run_hybrid(instance: &Instance, seed: u64, max_rounds: u64) -> HybridResult {
    let mut a = instance.space().sample_assignment(seed);
    let initial = a.clone();
    let mut tracker = TruthTracker::new(instance, &a);
    let (psi, psi_warning) = psi_of(instance);
    let mut sub_rounds = Vec::new();
    let mut entries: Vec<LogEntry> = Vec::new();
    let mut entry_rounds: Vec<u32> = Vec::new();
    let mut rounds = 0u32;
    let mut terminated = false;
    let mut step = 0u64;

    for round in 1..=max_rounds {
        if tracker.true_set().is_empty() {
            terminated = true;
            break;
        }
        rounds = round as u32;
        let a_round = a.clone();
        let (_q, capacities) = round_capacities(instance, &a_round);
        let mut v_set: Vec<usize> = tracker.true_set().iter().copied().collect();
        let mut sub = 0u32;
        while !v_set.is_empty() {
            sub += 1;
            let i_set = select_vcmep(instance, &v_set, &capacities);
            let draws: Vec<EventDraw> = i_set
                .iter()
                .map(|&b| sub_round_draw(instance, seed, round, sub as u64, b))
                .collect();
            let mut order: Vec<usize> = (0..draws.len()).collect();
            order.sort_by(|&x, &y| {
                (draws[x].rho, draws[x].event)
                    .partial_cmp(&(draws[y].rho, draws[y].event))
                    .unwrap()
            });

            let mut written: Vec<u32> = Vec::new();
            let mut resampled = 0usize;
            for &pos in &order {
                let b = draws[pos].event;
                if !tracker.is_true(b) {
                    continue;
                }
                step += 1;
                resampled += 1;
                for &(var, val) in &draws[pos].proposals {
                    let old = a.get(var as usize);
                    a.set(var as usize, val);
                    tracker.apply(instance, var, old, val);
                    written.push(var);
                }
                entries.push(LogEntry {
                    step,
                    event: b,
                    values: draws[pos].proposals.clone(),
                });
                entry_rounds.push(round as u32);
            }
            written.sort_unstable();
            written.dedup();
            let switched_vars: Vec<u32> = written
                .into_iter()
                .filter(|&var| a.get(var as usize) != a_round.get(var as usize))
                .collect();

            let v_before = v_set.len();
            v_set.retain(|&b| {
                !i_set.contains(&b)
                    && !instance
                        .event(b)
                        .terms()
                        .iter()
                        .any(|&(var, _)| switched_vars.contains(&var))
            });
            // the hybrid has no explicit LFMIS; the events actually
            // resampled this sub-round play its role
            sub_rounds.push(SubRoundRecord {
                round: round as u32,
                sub,
                v_size: v_before,
                i_size: i_set.len(),
                i_prime_size: resampled,
                switched: switched_vars.len(),
                longest_path: 0,
                assignment_after: a.values().to_vec(),
            });
        }
    }
    if tracker.true_set().is_empty() {
        terminated = true;
    }
    HybridResult {
        assignment: a,
        trace: ParallelTrace {
            sub_rounds,
            rounds,
            terminated,
            psi,
            psi_warning,
        },
        log: ExecutionLog { initial, entries },
        entry_rounds,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightCheckError {
    pub step: usize,
    pub event: usize,
    pub round: u32,
    pub height: u32,
}

impl fmt::Display for HeightCheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "resampling {} of event {} in round {} has witness height {}",
            self.step, self.event, self.round, self.height
        )
    }
}

impl core::error::Error for HeightCheckError {}

/// Check that every resampling of a hybrid run has a witness tree of height
/// exactly its round index.
pub fn round_height_check(
    hybrid: &HybridResult,
    instance: &Instance,
) -> Result<(), HeightCheckError> {
    let mut builder = TreeBuilder::new(instance);
    for (k, entry) in hybrid.log.entries.iter().enumerate() {
        let round = hybrid.entry_rounds[k];
        let tree = builder
            .build(&hybrid.log, k + 1, 1)
            .expect("in range")
            .expect("t >= 1");
        if tree.height() != round {
            return Err(HeightCheckError {
                step: k + 1,
                event: entry.event,
                round,
                height: tree.height(),
            });
        }
    }
    Ok(())
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
    fn simplified_no_true_events_zero_rounds() {
        // events demand value 3 of a 4-value domain whose mass sits on 0
        let space = VariableSpace::new(vec![vec![1.0, 0.0, 0.0, 0.0]; 2]).unwrap();
        let inst = Instance::build(space, vec![vec![(0, 3)], vec![(1, 3)]]).unwrap();
        let res = run_simplified(&inst, 1, 100);
        assert!(res.trace.terminated);
        assert_eq!(res.trace.rounds, 0);
        assert!(res.trace.sub_rounds.is_empty());
    }

    #[test]
    fn simplified_disjoint_events_selected_together() {
        // force both events true initially: all mass on 0, events demand 0
        let space = VariableSpace::new(vec![vec![1.0, 0.0]; 4]).unwrap();
        let inst =
            Instance::build(space, vec![vec![(0, 0), (1, 0)], vec![(2, 0), (3, 0)]]).unwrap();
        let res = run_simplified(&inst, 1, 1);
        let first = &res.trace.sub_rounds[0];
        assert_eq!(first.i_size, 2, "variable-disjoint events go in one batch");
    }

    #[test]
    fn simplified_sharing_events_split() {
        let space = VariableSpace::new(vec![vec![1.0, 0.0]; 3]).unwrap();
        let inst =
            Instance::build(space, vec![vec![(0, 0), (1, 0)], vec![(1, 0), (2, 0)]]).unwrap();
        let res = run_simplified(&inst, 1, 1);
        let first = &res.trace.sub_rounds[0];
        assert_eq!(first.i_size, 1, "events sharing a variable cannot batch");
    }

    #[test]
    fn capacity_formula() {
        // M = 3; q_i = 0.5 gives C_i = ceil(1/1.5) = 1
        let inst = Instance::build(
            VariableSpace::uniform(3, 2),
            vec![vec![(0, 0), (1, 0), (2, 0)], vec![(0, 1)]],
        )
        .unwrap();
        let a = Assignment::new(vec![0, 0, 0]);
        let (q, c) = round_capacities(&inst, &a);
        assert!((q[0] - 0.5).abs() < 1e-15);
        assert_eq!(c, vec![1, 1, 1]);

        // degenerate q = 0: capacity capped at m
        let space = VariableSpace::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        let inst = Instance::build(space, vec![vec![(0, 0)], vec![(1, 0)]]).unwrap();
        let a = Assignment::new(vec![0, 0]);
        let (q, c) = round_capacities(&inst, &a);
        assert_eq!(q[0], 0.0);
        assert_eq!(c[0], 2); // m = 2
    }

    #[test]
    fn lfmis_edgeless_takes_all() {
        let g = ConflictGraph {
            members: vec![10, 11, 12],
            rho: vec![0.3, 0.1, 0.2],
            out: vec![vec![], vec![], vec![]],
        };
        let res = lfmis_greedy(&g);
        assert_eq!(res.selected, vec![0, 1, 2]);
        assert_eq!(res.peel_iterations, 1);
        assert_eq!(g.longest_path(), 0);
    }

    #[test]
    fn lfmis_path_takes_alternating() {
        // B0 -> B1 -> B2 in increasing priority
        let g = ConflictGraph {
            members: vec![0, 1, 2],
            rho: vec![0.1, 0.2, 0.3],
            out: vec![vec![1], vec![2], vec![]],
        };
        let res = lfmis_greedy(&g);
        assert_eq!(res.selected, vec![0, 2]);
        assert_eq!(g.longest_path(), 2);
    }

    #[test]
    fn lfmis_star_center_wins() {
        let g = ConflictGraph {
            members: vec![0, 1, 2, 3],
            rho: vec![0.05, 0.5, 0.6, 0.7],
            out: vec![vec![1, 2, 3], vec![], vec![], vec![]],
        };
        let res = lfmis_greedy(&g);
        assert_eq!(res.selected, vec![0]);
    }

    #[test]
    fn full_single_event_resolves() {
        let space = VariableSpace::new(vec![vec![0.5, 0.5]; 2]).unwrap();
        let inst = Instance::build(space, vec![vec![(0, 0), (1, 0)]]).unwrap();
        for seed in 0..50u64 {
            let res = run_full(&inst, seed, 1_000);
            assert!(res.trace.terminated, "seed {seed}");
            assert!(inst.true_events(&res.assignment).is_empty());
        }
    }

    #[test]
    fn full_and_hybrid_couple_exactly() {
        let inst = toy();
        for seed in 0..100u64 {
            let full = run_full(&inst, seed, 1_000);
            let hybrid = run_hybrid(&inst, seed, 1_000);
            assert_eq!(full.trace.sub_rounds.len(), hybrid.trace.sub_rounds.len());
            for (f, h) in full.trace.sub_rounds.iter().zip(&hybrid.trace.sub_rounds) {
                assert_eq!(f.assignment_after, h.assignment_after, "seed {seed}");
                assert_eq!(f.i_size, h.i_size);
                assert_eq!(f.i_prime_size, h.i_prime_size);
                assert_eq!(f.switched, h.switched);
            }
            assert_eq!(full.assignment, hybrid.assignment);
            hybrid.log.validate(&inst).unwrap();
        }
    }

    #[test]
    fn hybrid_single_event_matches_sequential_resampling() {
        // one event: the hybrid resamples it exactly like the sequential
        // algorithm would, drawing from the proposal streams
        let inst = Instance::build(VariableSpace::uniform(1, 2), vec![vec![(0, 0)]]).unwrap();
        let res = run_hybrid(&inst, 5, 1_000);
        assert!(res.trace.terminated);
        assert_eq!(res.assignment.get(0), 1);
        for rec in &res.trace.sub_rounds {
            assert!(rec.i_size <= 1);
        }
    }

    #[test]
    fn height_equals_round() {
        let inst = toy();
        for seed in 0..100u64 {
            let hybrid = run_hybrid(&inst, seed, 1_000);
            assert!(hybrid.trace.terminated);
            round_height_check(&hybrid, &inst).unwrap();
        }
    }

    #[test]
    fn round_one_trees_have_height_one() {
        let inst = toy();
        for seed in 0..50u64 {
            let hybrid = run_hybrid(&inst, seed, 1_000);
            let mut builder = TreeBuilder::new(&inst);
            for (k, &r) in hybrid.entry_rounds.iter().enumerate() {
                if r == 1 {
                    let tree = builder.build(&hybrid.log, k + 1, 1).unwrap().unwrap();
                    assert_eq!(tree.height(), 1);
                }
            }
        }
    }

    #[test]
    fn nontermination_returns_trace() {
        let inst = Instance::build(
            VariableSpace::uniform(1, 2),
            vec![vec![(0, 0)], vec![(0, 1)]],
        )
        .unwrap();
        let res = run_full(&inst, 3, 10);
        assert!(!res.trace.terminated);
        assert_eq!(res.trace.rounds, 10);
        assert!(!res.trace.sub_rounds.is_empty());
    }
}
