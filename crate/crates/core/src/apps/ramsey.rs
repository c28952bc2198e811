//! Toy-scale off-diagonal Ramsey coloring: red s-cliques of K_n as the only
//! bad-events, solved by one-shot clique enumeration since resampling a red
//! clique can only shrink the red edge set.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::model::{Assignment, Instance, VariableSpace};
use crate::rng::{purpose, stream};
use crate::sequential::{ExecutionLog, LogEntry, RunResult, RunStats};

pub const RED: u32 = 1;
pub const BLUE: u32 = 0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RamseyError {
    STooSmall { s: u32 },
    NTooSmall { n: u32, s: u32 },
    TooManyEvents { count: u64, cap: u64 },
    Invalid(String),
}

impl fmt::Display for RamseyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RamseyError::STooSmall { s } => write!(f, "s must be at least 3, got {s}"),
            RamseyError::NTooSmall { n, s } => write!(f, "n = {n} below clique size s = {s}"),
            RamseyError::TooManyEvents { count, cap } => {
                write!(f, "{count} clique events exceed the cap of {cap}")
            }
            RamseyError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for RamseyError {}

/// Derived parameters: the red probability `p`, event probability
/// `q = p^C(s,2)`, weight `mu = q/(1-q)`, and the reported asymptotic
/// constants.
#[derive(Clone, Copy, Debug)]
pub struct RamseyConfig {
    pub n: u32,
    pub s: u32,
    pub p: f64,
    pub q: f64,
    pub mu: f64,
    pub c_s: f64,
    pub c_s_prime: f64,
}

/// `p = (2(s-2)!/((s-1)s))^{2/(s^2-s-2)} n^{-2/(s+1)}`.
pub fn ramsey_params(n: u32, s: u32) -> RamseyConfig {
    let sf = s as f64;
    let choose2 = sf * (sf - 1.0) / 2.0;
    let base = 2.0 * math::factorial(s as u64 - 2) / ((sf - 1.0) * sf);
    let p = math::pow(base, 2.0 / (sf * sf - sf - 2.0)) * math::pow(n as f64, -2.0 / (sf + 1.0));
    let q = math::pow(p, choose2);
    let mu = q / (1.0 - q);
    let c_s = math::pow(2.0 / sf - 2.0 / (sf - 1.0) + 1.0, (sf + 1.0) / 2.0)
        * math::pow(
            2.0 * math::factorial(s as u64 - 2) / (sf * math::pow(sf - 1.0, choose2)),
            1.0 / (sf - 2.0),
        );
    let c_s_prime = math::pow(base, 2.0 / (sf * sf - sf - 2.0)) * (1.0 + 2.0 / (sf - sf * sf));
    RamseyConfig {
        n,
        s,
        p,
        q,
        mu,
        c_s,
        c_s_prime,
    }
}

/// Variable index of edge {u, v} of K_n (u < v).
pub fn edge_index(n: u32, u: u32, v: u32) -> u32 {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// Bound on the terminal probability that a fixed K_t is all blue:
/// `((1-p)(1 + C(n-2, s-2) mu))^{C(t,2)}`.
pub fn ramsey_blue_bound(n: u32, s: u32, t: u32) -> f64 {
    let cfg = ramsey_params(n, s);
    let per_edge = (1.0 - cfg.p) * (1.0 + math::binomial(n as u64 - 2, s as u64 - 2) * cfg.mu);
    math::pow(per_edge, math::binomial(t as u64, 2))
}

/// Build the instance: one red-with-probability-p variable per edge of
/// K_n, one bad-event per s-clique (all its edges red), weights
/// `mu = q/(1-q)`. Events are ordered by their sorted vertex tuples.
pub fn ramsey_build(
    n: u32,
    s: u32,
    event_cap: u64,
) -> Result<(Instance, RamseyConfig), RamseyError> {
    if s < 3 {
        return Err(RamseyError::STooSmall { s });
    }
    if n < s {
        return Err(RamseyError::NTooSmall { n, s });
    }
    let count = math::binomial_u64(n as u64, s as u64);
    if count > event_cap {
        return Err(RamseyError::TooManyEvents {
            count,
            cap: event_cap,
        });
    }
    let cfg = ramsey_params(n, s);
    let num_edges = (n * (n - 1) / 2) as usize;
    let biases = alloc::vec![cfg.p; num_edges];
    let space = VariableSpace::bernoulli(&biases)
        .map_err(|e| RamseyError::Invalid(format!("bad bias: {e}")))?;

    // enumerate s-subsets in lexicographic order
    let mut events = Vec::with_capacity(count as usize);
    let mut clique: Vec<u32> = (0..s).collect();
    loop {
        let mut terms = Vec::with_capacity((s * (s - 1) / 2) as usize);
        for i in 0..s as usize {
            for j in (i + 1)..s as usize {
                terms.push((edge_index(n, clique[i], clique[j]), RED));
            }
        }
        events.push(terms);
        // next combination
        let mut i = s as usize;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if clique[i] < n - (s - i as u32) {
                clique[i] += 1;
                for j in (i + 1)..s as usize {
                    clique[j] = clique[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                clique.clear();
                break;
            }
        }
        if clique.is_empty() {
            break;
        }
    }
    let instance = Instance::build(space, events)
        .map_err(|e| RamseyError::Invalid(format!("instance rejected: {e}")))?;
    Ok((instance, cfg))
}

/// All red s-cliques of the coloring, by the branching process: grow red
/// K_l lists one vertex at a time through the red adjacency.
pub fn branching_red_cliques(n: u32, s: u32, a: &Assignment) -> Vec<Vec<u32>> {
    let red = |u: u32, v: u32| -> bool {
        let (x, y) = (u.min(v), u.max(v));
        a.get(edge_index(n, x, y) as usize) == RED
    };
    let mut frontier: Vec<Vec<u32>> = (0..n).map(|v| alloc::vec![v]).collect();
    for _ in 1..s {
        let mut next = Vec::new();
        for clique in &frontier {
            let last = *clique.last().unwrap();
            for w in (last + 1)..n {
                if clique.iter().all(|&u| red(u, w)) {
                    let mut bigger = clique.clone();
                    bigger.push(w);
                    next.push(bigger);
                }
            }
        }
        frontier = next;
    }
    frontier
}

/// Is the clique on `vertices` entirely blue?
pub fn clique_is_blue(n: u32, vertices: &[u32], a: &Assignment) -> bool {
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            let (u, v) = (vertices[i].min(vertices[j]), vertices[i].max(vertices[j]));
            if a.get(edge_index(n, u, v) as usize) != BLUE {
                return false;
            }
        }
    }
    true
}

/// Resample red s-cliques until none remain, enumerating them only once:
/// resampled edges were red, so the red edge set only shrinks and no new
/// bad-event can appear. Produces a standard execution log (the clearing
/// order is a valid prior-state-only rule).
pub fn ramsey_solve(
    instance: &Instance,
    cfg: &RamseyConfig,
    seed: u64,
    max_steps: u64,
) -> Result<RunResult, RamseyError> {
    let n = cfg.n;
    let mut a = instance.space().sample_assignment(seed);
    let initial = a.clone();

    // map sorted edge-variable tuples to event ids
    let by_terms: BTreeMap<Vec<u32>, usize> = instance
        .events()
        .iter()
        .map(|ev| (ev.terms().iter().map(|&(v, _)| v).collect(), ev.id()))
        .collect();

    let cliques = branching_red_cliques(n, cfg.s, &a);
    let mut entries = Vec::new();
    let mut resamples = alloc::vec![0u64; instance.event_count()];
    let mut steps = 0u64;
    let mut terminated = true;

    'outer: for clique in &cliques {
        let mut vars = Vec::new();
        for i in 0..clique.len() {
            for j in (i + 1)..clique.len() {
                vars.push(edge_index(n, clique[i], clique[j]));
            }
        }
        vars.sort_unstable();
        let event = *by_terms
            .get(&vars)
            .expect("enumerated clique is an instance event");
        // clear this clique; earlier clears may already have broken it
        while instance.event(event).is_true(&a) {
            if steps >= max_steps {
                terminated = false;
                break 'outer;
            }
            steps += 1;
            let mut values = Vec::with_capacity(vars.len());
            for &var in &vars {
                let new = stream(seed, &[purpose::RESAMPLE, steps, var as u64])
                    .sample(instance.space().probs_of(var as usize));
                a.set(var as usize, new);
                values.push((var, new));
            }
            entries.push(LogEntry {
                step: steps,
                event,
                values,
            });
            resamples[event] += 1;
        }
    }
    if terminated {
        debug_assert!(branching_red_cliques(n, cfg.s, &a).is_empty());
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{enumerate_orderable_sets, DEFAULT_ENUM_CAP};
    use alloc::vec;

    #[test]
    fn params_s3() {
        let cfg = ramsey_params(20, 3);
        // p = (1/3)^{1/2} n^{-1/2}
        let expect = math::sqrt(1.0 / 3.0) / math::sqrt(20.0);
        assert!((cfg.p - expect).abs() < 1e-12);
        assert!((cfg.q - cfg.p * cfg.p * cfg.p).abs() < 1e-15);
        assert!((cfg.mu - cfg.q / (1.0 - cfg.q)).abs() < 1e-15);
    }

    #[test]
    fn edge_indexing_is_a_bijection() {
        let n = 7;
        let mut seen = vec![false; (n * (n - 1) / 2) as usize];
        for u in 0..n {
            for v in (u + 1)..n {
                let idx = edge_index(n, u, v) as usize;
                assert!(!seen[idx]);
                seen[idx] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn events_have_no_lopsidependent_neighbors() {
        let (inst, cfg) = ramsey_build(6, 3, 1_000_000).unwrap();
        assert_eq!(inst.event_count(), 20);
        for id in 0..inst.event_count() {
            assert!(inst.lopsi_neighbors(id).is_empty());
            assert!((inst.event_prob(id) - cfg.q).abs() < 1e-15);
        }
        // so each event's orderable family is exactly { {}, {B} }
        let sets = enumerate_orderable_sets(&inst, 0, DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(sets, vec![vec![], vec![0]]);
    }

    #[test]
    fn blue_bound_formula() {
        let cfg = ramsey_params(20, 3);
        let manual = math::pow((1.0 - cfg.p) * (1.0 + 18.0 * cfg.mu), 10.0);
        assert!((ramsey_blue_bound(20, 3, 5) - manual).abs() < 1e-12);
    }

    #[test]
    fn event_cap_enforced() {
        assert!(matches!(
            ramsey_build(20, 3, 100),
            Err(RamseyError::TooManyEvents {
                count: 1140,
                cap: 100
            })
        ));
    }

    // The one-shot clearing solver and the generic engine are independent
    // routes to the same contract: both terminate with no red clique.
    #[test]
    fn optimized_solver_agrees_with_generic_engine() {
        use crate::sequential::{run, LowestIdRule};
        let (inst, cfg) = ramsey_build(9, 3, 1_000_000).unwrap();
        for seed in 0..20u64 {
            let fast = ramsey_solve(&inst, &cfg, seed, 1_000_000).unwrap();
            let generic = run(&inst, &mut LowestIdRule, seed, 1_000_000).unwrap();
            assert!(fast.stats.terminated && generic.stats.terminated);
            // identical initial assignments since the initial-draw streams
            // are shared
            assert_eq!(fast.log.initial, generic.log.initial);
            assert!(branching_red_cliques(9, 3, &fast.assignment).is_empty());
            assert!(branching_red_cliques(9, 3, &generic.assignment).is_empty());
            assert!(inst.true_events(&generic.assignment).is_empty());
            // the branching enumeration and the event index agree on the
            // initially-true events
            let mut enumerated: Vec<usize> = branching_red_cliques(9, 3, &fast.log.initial)
                .iter()
                .map(|c| {
                    let mut vars: Vec<u32> = Vec::new();
                    for i in 0..c.len() {
                        for j in (i + 1)..c.len() {
                            vars.push(edge_index(9, c[i], c[j]));
                        }
                    }
                    vars.sort_unstable();
                    inst.events()
                        .iter()
                        .find(|ev| {
                            ev.terms().iter().map(|&(v, _)| v).collect::<Vec<_>>() == vars
                        })
                        .expect("clique is an event")
                        .id()
                })
                .collect();
            enumerated.sort_unstable();
            assert_eq!(enumerated, inst.true_events(&fast.log.initial));
        }
    }

    #[test]
    fn solve_clears_all_red_cliques() {
        let (inst, cfg) = ramsey_build(10, 3, 1_000_000).unwrap();
        for seed in 0..30u64 {
            let res = ramsey_solve(&inst, &cfg, seed, 1_000_000).unwrap();
            assert!(res.stats.terminated);
            assert!(branching_red_cliques(10, 3, &res.assignment).is_empty());
            assert!(inst.true_events(&res.assignment).is_empty());
            res.log.validate(&inst).unwrap();
            // the red edge set shrinks along the log: every resampled edge
            // was red just before its step
            let mut a = res.log.initial.clone();
            for entry in &res.log.entries {
                for &(var, _) in &entry.values {
                    assert_eq!(a.get(var as usize), RED);
                }
                for &(var, val) in &entry.values {
                    a.set(var as usize, val);
                }
            }
        }
    }
}
