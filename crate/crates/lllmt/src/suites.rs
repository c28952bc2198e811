//! Statistical and structural suites behind both the `stats` subcommand
//! and the acceptance tests: each one pins its parameters and thresholds
//! and reports a single pass/fail verdict with details.

use std::collections::HashMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use lllmt_core::apps::hamiltonian::{hamiltonian_feasible, hamiltonian_threshold};
use lllmt_core::apps::hypergraph::{hypergraph_lmax, HypergraphCriterion};
use lllmt_core::apps::ramsey::{
    branching_red_cliques, clique_is_blue, ramsey_blue_bound, ramsey_build, ramsey_solve,
};
use lllmt_core::apps::sat::ksat_build;
use lllmt_core::apps::transversal::{
    extract_transversal, is_independent_transversal, transversal_alpha, transversal_build,
};
use lllmt_core::criteria::{
    check, enumerate_assignable_sets, enumerate_orderable_sets, is_assignable, is_orderable, rhs,
    Criterion, CriterionKind, MuVector, DEFAULT_ENUM_CAP,
};
use lllmt_core::math;
use lllmt_core::model::{Instance, VariableSpace};
use lllmt_core::parallel::{round_height_check, run_full, run_hybrid};
use lllmt_core::rng::{derive_seed, purpose, stream};
use lllmt_core::sequential::{run, LowestIdRule};
use lllmt_core::vcmep::{natural_order, vcmep_greedy, vcmep_parallel_sim};
use lllmt_core::witness::TreeBuilder;

use crate::gen;
use crate::json::HypergraphTableRowJson;

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub pass: bool,
    pub summary: String,
    pub details: Value,
}

impl SuiteReport {
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "pass": self.pass,
            "summary": self.summary,
            "details": self.details,
        })
    }
}

/// The toy instance used by the witness-tree and resampling suites:
/// three uniform bits with events {(0,0),(1,0)} and {(1,1),(2,0)}; its
/// exact fixed point is mu = (1/2, 1/2).
pub fn toy_instance() -> Instance {
    Instance::build(
        VariableSpace::uniform(3, 2),
        vec![vec![(0, 0), (1, 0)], vec![(1, 1), (2, 0)]],
    )
    .expect("valid instance")
}

pub const TOY_MU: f64 = 0.5;

/// Occurrence-bound table rows for c-colorings of k-uniform hypergraphs.
pub fn hypergraph_table(c: u32, kmin: u32, kmax: u32) -> Vec<HypergraphTableRowJson> {
    (kmin..=kmax)
        .map(|k| HypergraphTableRowJson {
            k,
            l_new: hypergraph_lmax(c, k, HypergraphCriterion::New),
            l_original: hypergraph_lmax(c, k, HypergraphCriterion::Original),
        })
        .collect()
}

/// Published table values for c = 2, k = 4..11.
pub fn reference_table_c2() -> Vec<HypergraphTableRowJson> {
    let l_new = [2u32, 3, 5, 8, 13, 23, 40, 72];
    let l_orig = [2u32, 3, 4, 7, 12, 21, 38, 69];
    (4..=11u32)
        .map(|k| HypergraphTableRowJson {
            k,
            l_new: l_new[(k - 4) as usize],
            l_original: l_orig[(k - 4) as usize],
        })
        .collect()
}

pub fn table_suite() -> SuiteReport {
    let rows = hypergraph_table(2, 4, 11);
    let expected = reference_table_c2();
    let pass = rows == expected;
    SuiteReport {
        name: "table-hypergraph",
        pass,
        summary: format!(
            "c=2, k=4..11 table {}",
            if pass { "matches" } else { "DIFFERS" }
        ),
        details: json!({ "rows": rows, "expected": expected }),
    }
}

/// Pointwise criterion ordering on random instances, 1e-9 relative slack:
/// orderable <= assignable <= blend <= llll-variable, blend <= pegden-variable.
pub fn criterion_ordering_suite(seed: u64, count: u64) -> SuiteReport {
    let chain = [
        CriterionKind::OrderableExact,
        CriterionKind::AssignableExact,
        CriterionKind::BlendClosedForm,
        CriterionKind::LlllVariable,
    ];
    let failures: Vec<String> = (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let s = derive_seed(seed, 10, i);
            let inst = gen::small_instance(s, 10, 8);
            let mu = gen::random_mu(derive_seed(seed, 11, i), inst.event_count());
            for target in 0..inst.event_count() {
                let vals: Vec<f64> = chain
                    .iter()
                    .map(|&k| rhs(&inst, target, &mu, &Criterion::new(k)).unwrap())
                    .collect();
                for w in vals.windows(2) {
                    if w[0] > w[1] * (1.0 + 1e-9) + 1e-15 {
                        return Some(format!("instance {i} target {target}: chain {vals:?}"));
                    }
                }
                let blend = vals[2];
                let pegden = rhs(
                    &inst,
                    target,
                    &mu,
                    &Criterion::new(CriterionKind::PegdenVariable),
                )
                .unwrap();
                if blend > pegden * (1.0 + 1e-9) + 1e-15 {
                    return Some(format!(
                        "instance {i} target {target}: blend {blend} > pegden {pegden}"
                    ));
                }
            }
            None
        })
        .collect();
    SuiteReport {
        name: "criterion-ordering",
        pass: failures.is_empty(),
        summary: format!("{count} instances, {} violations", failures.len()),
        details: json!({ "instances": count, "failures": failures }),
    }
}

/// Exhaustive check that every orderable subset is assignable.
pub fn orderable_assignable_suite(seed: u64, count: u64) -> SuiteReport {
    let failures: Vec<String> = (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let s = derive_seed(seed, 10, i); // same family as the ordering suite
            let inst = gen::small_instance(s, 10, 8);
            let m = inst.event_count();
            for target in 0..m {
                let terms = inst.event(target).terms().to_vec();
                for mask in 0u32..(1 << m) {
                    let set: Vec<usize> = (0..m).filter(|&b| mask >> b & 1 == 1).collect();
                    if is_orderable(&inst, &terms, Some(target), &set)
                        && !is_assignable(&inst, &terms, Some(target), &set)
                    {
                        return Some(format!("instance {i} target {target} set {set:?}"));
                    }
                }
            }
            None
        })
        .collect();
    SuiteReport {
        name: "orderable-implies-assignable",
        pass: failures.is_empty(),
        summary: format!("{count} instances exhausted, {} violations", failures.len()),
        details: json!({ "instances": count, "failures": failures }),
    }
}

/// Statistical witness-tree check on the toy instance: for every tree shape
/// observed across the runs, the frequency of runs exhibiting it stays
/// within `w + 3 sqrt(w/N)` of its weight bound.
pub fn witness_lemma_suite(seed: u64, runs: u64) -> SuiteReport {
    let inst = toy_instance();
    let per_run: Vec<Vec<(Vec<u64>, f64)>> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let s = derive_seed(seed, 20, r);
            let res = run(&inst, &mut LowestIdRule, s, 100_000).expect("no rule errors");
            assert!(
                res.stats.terminated,
                "toy instance run {r} did not terminate"
            );
            let mut builder = TreeBuilder::new(&inst);
            let mut seen: Vec<(Vec<u64>, f64)> = Vec::new();
            let mut roots = vec![0u64; inst.event_count()];
            for t in 1..=res.log.entries.len() {
                let tree = builder.build(&res.log, t, 1).unwrap().unwrap();
                roots[tree.root_label()] += 1;
                let canon = tree.canonical();
                if !seen.iter().any(|(c, _)| *c == canon) {
                    let w = tree.weight(&inst);
                    seen.push((canon, w));
                }
            }
            // the trees are pairwise distinct, one per resampling, so tree
            // counts per root coincide with the resample counts
            assert_eq!(roots, res.stats.resamples, "run {r}");
            seen
        })
        .collect();

    let mut counts: HashMap<Vec<u64>, (u64, f64)> = HashMap::new();
    for run_trees in per_run {
        for (canon, w) in run_trees {
            let e = counts.entry(canon).or_insert((0, w));
            e.0 += 1;
        }
    }
    let n = runs as f64;
    let mut violations = 0u64;
    // Diagnostics: the same comparison restricted to shapes whose weight
    // bound carries at least ~16 expected observations, where a w-based
    // standard deviation is statistically meaningful. Shapes far below
    // 1/N violate the stated margin whenever they are observed at all
    // (a single observation already has frequency 1/N >> w + 3 sqrt(w/N)),
    // and the run-length tail of this instance makes such observations
    // near-certain: P(T >= d) = 2^-d exactly, while depth-d shapes carry
    // weight 4^-d spread over ~2^d distinct paths (the frequency bound is
    // tight for paths). See the repository notes on this check.
    let mut violations_heavy = 0u64;
    let mut observed_once_below_mass = 0u64;
    for &(count, w) in counts.values() {
        let freq = count as f64 / n;
        let bound = w + 3.0 * math::sqrt(w / n);
        if freq > bound {
            violations += 1;
            if w * n >= 16.0 {
                violations_heavy += 1;
            }
            if count == 1 {
                observed_once_below_mass += 1;
            }
        }
    }
    SuiteReport {
        name: "witness-lemma",
        pass: violations == 0,
        summary: format!(
            "{} shapes over {} runs: {} violations of the stated margin \
             ({} among shapes with w >= 16/N; {} are single observations of \
             shapes with w << 1/N, where the w-based margin cannot hold)",
            counts.len(),
            runs,
            violations,
            violations_heavy,
            observed_once_below_mass,
        ),
        details: json!({
            "runs": runs,
            "shapes": counts.len(),
            "violations": violations,
            "violations_heavy_mass": violations_heavy,
            "violations_observed_once": observed_once_below_mass,
        }),
    }
}

/// Mean resample counts on the toy instance against mu = 1/2 per event.
pub fn resample_bound_suite(seed: u64, runs: u64) -> SuiteReport {
    let inst = toy_instance();
    let counts: Vec<Vec<u64>> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let s = derive_seed(seed, 21, r);
            let res = run(&inst, &mut LowestIdRule, s, 100_000).expect("no rule errors");
            assert!(res.stats.terminated);
            res.stats.resamples
        })
        .collect();
    let n = runs as f64;
    let mut pass = true;
    let mut detail_rows = Vec::new();
    for event in 0..inst.event_count() {
        let mean = counts.iter().map(|c| c[event] as f64).sum::<f64>() / n;
        let var = counts
            .iter()
            .map(|c| {
                let d = c[event] as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / (n - 1.0);
        let sd = math::sqrt(var);
        let limit = TOY_MU + 3.0 * sd / math::sqrt(n);
        if mean > limit {
            pass = false;
        }
        detail_rows.push(json!({
            "event": event, "mean": mean, "sd": sd, "limit": limit,
        }));
    }
    SuiteReport {
        name: "resample-bound",
        pass,
        summary: format!("{runs} runs, per-event means vs mu = {TOY_MU}"),
        details: json!({ "runs": runs, "events": detail_rows }),
    }
}

/// Bit-exact coupling between the full parallel algorithm and its hybrid.
/// Also collects the conflict-graph longest-path telemetry (these stay
/// small; recorded, not asserted).
pub fn coupling_suite(seed: u64, instances: u64, seeds_per: u64) -> SuiteReport {
    let outcomes: Vec<Result<Vec<usize>, String>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            // alternate uniform and skewed families so conflict graphs
            // with real edges (capacities above one) are exercised too
            let (inst, _, _) = if i % 2 == 0 {
                gen::slack_family_instance(derive_seed(seed, 30, i), 0.5)
            } else {
                gen::skewed_family_instance(derive_seed(seed, 30, i), 0.5)
            };
            let mut paths = Vec::new();
            for sj in 0..seeds_per {
                let s = derive_seed(seed, 31, i * 1000 + sj);
                let full = run_full(&inst, s, 10_000);
                let hybrid = run_hybrid(&inst, s, 10_000);
                if full.trace.sub_rounds.len() != hybrid.trace.sub_rounds.len() {
                    return Err(format!("instance {i} seed {sj}: sub-round counts differ"));
                }
                for (f, h) in full.trace.sub_rounds.iter().zip(&hybrid.trace.sub_rounds) {
                    if f.assignment_after != h.assignment_after {
                        return Err(format!(
                            "instance {i} seed {sj}: state differs at round {} sub {}",
                            f.round, f.sub
                        ));
                    }
                    paths.push(f.longest_path);
                }
                if full.assignment != hybrid.assignment {
                    return Err(format!("instance {i} seed {sj}: final states differ"));
                }
            }
            Ok(paths)
        })
        .collect();
    let failures: Vec<String> = outcomes
        .iter()
        .filter_map(|o| o.as_ref().err().cloned())
        .collect();
    let mut histogram: Vec<u64> = Vec::new();
    for paths in outcomes.iter().filter_map(|o| o.as_ref().ok()) {
        for &p in paths {
            if histogram.len() <= p {
                histogram.resize(p + 1, 0);
            }
            histogram[p] += 1;
        }
    }
    SuiteReport {
        name: "coupling",
        pass: failures.is_empty(),
        summary: format!(
            "{} (instance, seed) pairs, {} mismatches; conflict-path histogram {:?}",
            instances * seeds_per,
            failures.len(),
            histogram,
        ),
        details: json!({
            "pairs": instances * seeds_per,
            "failures": failures,
            "longest_path_histogram": histogram,
        }),
    }
}

/// Witness-tree height equals the parallel round index, fuzzed.
pub fn tree_height_suite(seed: u64, runs: u64) -> SuiteReport {
    let failures: Vec<String> = (0..runs)
        .into_par_iter()
        .filter_map(|i| {
            let (inst, _, _) = if i % 2 == 0 {
                gen::slack_family_instance(derive_seed(seed, 40, i), 0.5)
            } else {
                gen::skewed_family_instance(derive_seed(seed, 40, i), 0.5)
            };
            let s = derive_seed(seed, 41, i);
            let hybrid = run_hybrid(&inst, s, 10_000);
            if !hybrid.trace.terminated {
                return Some(format!("run {i} did not terminate"));
            }
            round_height_check(&hybrid, &inst)
                .err()
                .map(|e| format!("run {i}: {e}"))
        })
        .collect();
    SuiteReport {
        name: "tree-height",
        pass: failures.is_empty(),
        summary: format!("{runs} parallel runs, {} violations", failures.len()),
        details: json!({ "runs": runs, "failures": failures }),
    }
}

/// Feasibility and maximality of both packing algorithms, with the unit
/// capacity case yielding pairwise-disjoint edge sets.
pub fn vcmep_suite(seed: u64, count: u64) -> SuiteReport {
    let failures: Vec<String> = (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let unit = i % 3 == 0;
            let g = gen::random_hypergraph(derive_seed(seed, 50, i), 30, 5, unit);
            let greedy = vcmep_greedy(&g, &natural_order(&g));
            if !greedy.is_feasible(&g) || !greedy.is_maximal(&g) {
                return Some(format!("hypergraph {i}: greedy not feasible-maximal"));
            }
            let par = vcmep_parallel_sim(&g, derive_seed(seed, 51, i), 0.5, None).unwrap();
            if !par.terminated {
                return Some(format!(
                    "hypergraph {i}: parallel packing hit the round cap"
                ));
            }
            if !par.packing.is_feasible(&g) || !par.packing.is_maximal(&g) {
                return Some(format!("hypergraph {i}: parallel not feasible-maximal"));
            }
            if unit {
                for packing in [&greedy, &par.packing] {
                    for (a_idx, &ea) in packing.selected.iter().enumerate() {
                        for &eb in packing.selected.iter().skip(a_idx + 1) {
                            if g.edges[ea].iter().any(|v| g.edges[eb].contains(v)) {
                                return Some(format!(
                                    "hypergraph {i}: unit-cap packing has intersecting edges"
                                ));
                            }
                        }
                    }
                }
            }
            None
        })
        .collect();
    SuiteReport {
        name: "vcmep",
        pass: failures.is_empty(),
        summary: format!("{count} hypergraphs, {} violations", failures.len()),
        details: json!({ "count": count, "failures": failures }),
    }
}

/// Regular balanced k=6 instances at the derived occurrence bound L=8:
/// the resampling algorithm solves every one, and the blended closed form
/// holds per clause with the uniform weight alpha.
pub fn ksat_suite(seed: u64, instances: u64) -> SuiteReport {
    let results: Vec<Result<(u64, f64), String>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let clauses = gen::ksat_regular(derive_seed(seed, 60, i), 200, 6, 8);
            let (inst, cfg) =
                ksat_build(&clauses, 200).map_err(|e| format!("instance {i}: {e}"))?;
            if !cfg.within_bound {
                return Err(format!(
                    "instance {i}: L = {} above bound {}",
                    cfg.l_max, cfg.l_bound
                ));
            }
            let mu = MuVector::uniform(inst.event_count(), cfg.alpha)
                .map_err(|e| format!("instance {i}: {e}"))?;
            let report = check(&inst, &mu, &Criterion::new(CriterionKind::BlendClosedForm))
                .map_err(|e| format!("instance {i}: {e}"))?;
            if !report.satisfied {
                return Err(format!("instance {i}: blend criterion fails at alpha"));
            }
            // the balanced occurrence split is the worst case under the
            // chosen bias: every per-variable factor of the per-clause
            // bound stays below the balanced-case factor
            let balanced =
                0.5 * (1.0 + cfg.alpha / cfg.k as f64 + cfg.alpha * cfg.l_max as f64 / 2.0);
            for (ci, clause) in clauses.iter().enumerate() {
                for &(v, positive) in clause {
                    let occ = cfg.occurrences[v as usize] as f64;
                    let eta = if positive {
                        1.0 - cfg.positive_fraction[v as usize]
                    } else {
                        cfg.positive_fraction[v as usize]
                    };
                    let term_prob = 0.5 - cfg.x * (eta - 0.5);
                    let factor =
                        term_prob * (1.0 + eta * occ * cfg.alpha + cfg.alpha / cfg.k as f64);
                    if factor > balanced * (1.0 + 1e-9) {
                        return Err(format!(
                            "instance {i} clause {ci}: factor {factor} above balanced {balanced}"
                        ));
                    }
                }
            }
            let s = derive_seed(seed, 61, i);
            let res = run(&inst, &mut LowestIdRule, s, 1_000_000)
                .map_err(|e| format!("instance {i}: {e}"))?;
            if !res.stats.terminated {
                return Err(format!("instance {i}: not solved within the step budget"));
            }
            if !inst.true_events(&res.assignment).is_empty() {
                return Err(format!(
                    "instance {i}: terminal state leaves a clause falsified"
                ));
            }
            Ok((res.stats.steps, cfg.alpha))
        })
        .collect();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let solved = results.iter().filter(|r| r.is_ok()).count();
    let steps: Vec<u64> = results
        .iter()
        .filter_map(|r| r.as_ref().ok().map(|&(s, _)| s))
        .collect();
    let max_steps = steps.iter().copied().max().unwrap_or(0);
    SuiteReport {
        name: "ksat",
        pass: failures.is_empty(),
        summary: format!("solved {solved}/{instances}, max steps {max_steps}"),
        details: json!({
            "instances": instances,
            "solved": solved,
            "max_steps": max_steps,
            "failures": failures,
        }),
    }
}

/// Independent transversals at Delta=2, b=7 solve every instance; the
/// certificate exists at b=7 and vanishes at b=6.
pub fn transversal_suite(seed: u64, instances: u64) -> SuiteReport {
    let mut failures: Vec<String> = Vec::new();
    if transversal_alpha(7, 2).is_none() {
        failures.push("alpha missing at b=7, delta=2".into());
    }
    if transversal_alpha(6, 2).is_some() {
        failures.push("alpha unexpectedly exists at b=6, delta=2".into());
    }
    let solve_failures: Vec<String> = (0..instances)
        .into_par_iter()
        .filter_map(|i| {
            let (n, edges, partition) = gen::partitioned_graph(derive_seed(seed, 70, i), 8, 7, 2);
            let (inst, cfg) = match transversal_build(n, &edges, &partition) {
                Ok(x) => x,
                Err(e) => return Some(format!("instance {i}: {e}")),
            };
            if cfg.alpha.is_none() {
                return Some(format!("instance {i}: no alpha at b=7"));
            }
            let s = derive_seed(seed, 71, i);
            let res = match run(&inst, &mut LowestIdRule, s, 1_000_000) {
                Ok(r) => r,
                Err(e) => return Some(format!("instance {i}: {e}")),
            };
            if !res.stats.terminated {
                return Some(format!("instance {i}: not solved"));
            }
            let chosen = extract_transversal(&res.assignment, &partition);
            if !is_independent_transversal(&chosen, &edges) {
                return Some(format!("instance {i}: chosen set is not independent"));
            }
            None
        })
        .collect();
    failures.extend(solve_failures);
    SuiteReport {
        name: "transversal",
        pass: failures.is_empty(),
        summary: format!(
            "{instances} instances at (b,delta)=(7,2), {} failures",
            failures.len()
        ),
        details: json!({ "instances": instances, "failures": failures }),
    }
}

/// The degree threshold of the two-weight system must come out 43, with 42
/// infeasible; the grid is refined until the answer is stable.
pub fn hamiltonian_suite() -> SuiteReport {
    let mut resolution = 1e-4;
    let mut t = hamiltonian_threshold(resolution);
    let mut refinements = 0u32;
    while refinements < 3 {
        let finer = resolution / 5.0;
        let t2 = hamiltonian_threshold(finer);
        if t2 == t {
            break;
        }
        t = t2;
        resolution = finer;
        refinements += 1;
    }
    let feasible_43 = hamiltonian_feasible(43, resolution);
    let infeasible_42 = hamiltonian_feasible(42, resolution).is_none();
    let pass = t == 43 && feasible_43.is_some() && infeasible_42;
    let w = feasible_43.map(|w| json!({ "p": w.p, "a": w.a, "b": w.b }));
    SuiteReport {
        name: "hamiltonian-threshold",
        pass,
        summary: format!(
            "threshold {t} at resolution {resolution:e} ({refinements} refinements), k=42 infeasible: {infeasible_42}"
        ),
        details: json!({
            "threshold": t,
            "resolution": resolution,
            "weights_at_43": w,
            "infeasible_at_42": infeasible_42,
        }),
    }
}

/// Toy Ramsey runs: red triangles always cleared, and the terminal blue
/// 5-clique frequency respects the distribution bound.
pub fn ramsey_suite(seed: u64, runs: u64) -> SuiteReport {
    let (n, s, t) = (20u32, 3u32, 5u32);
    let (inst, cfg) = ramsey_build(n, s, 1_000_000).expect("toy scale");
    let bound = ramsey_blue_bound(n, s, t);

    // fixed sample of 5-cliques
    let mut g = stream(seed, &[purpose::GEN, 90]);
    let clique_count = 20usize;
    let cliques: Vec<Vec<u32>> = (0..clique_count)
        .map(|_| {
            let mut vs: Vec<u32> = (0..n).collect();
            for i in 0..t as usize {
                let j = i + g.next_below((n as usize - i) as u64) as usize;
                vs.swap(i, j);
            }
            let mut c = vs[..t as usize].to_vec();
            c.sort_unstable();
            c
        })
        .collect();

    let outcomes: Vec<Result<Vec<bool>, String>> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let sr = derive_seed(seed, 91, r);
            let res =
                ramsey_solve(&inst, &cfg, sr, 1_000_000).map_err(|e| format!("run {r}: {e}"))?;
            if !res.stats.terminated {
                return Err(format!("run {r}: not terminated"));
            }
            if !branching_red_cliques(n, s, &res.assignment).is_empty() {
                return Err(format!("run {r}: red triangle remains"));
            }
            Ok(cliques
                .iter()
                .map(|c| clique_is_blue(n, c, &res.assignment))
                .collect())
        })
        .collect();

    let mut failures: Vec<String> = outcomes
        .iter()
        .filter_map(|o| o.as_ref().err().cloned())
        .collect();
    let ok_runs: Vec<&Vec<bool>> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    let n_ok = ok_runs.len() as f64;
    let sd = math::sqrt(bound * (1.0 - bound) / n_ok.max(1.0));
    let limit = bound + 3.0 * sd;
    let mut max_freq = 0.0f64;
    if !ok_runs.is_empty() {
        for ci in 0..clique_count {
            let freq = ok_runs.iter().filter(|blues| blues[ci]).count() as f64 / n_ok;
            max_freq = max_freq.max(freq);
            if freq > limit {
                failures.push(format!("clique {ci}: blue frequency {freq} above {limit}"));
            }
        }
    }
    SuiteReport {
        name: "ramsey",
        pass: failures.is_empty(),
        summary: format!(
            "{runs} runs at n={n}, s={s}: max blue-K{t} frequency {max_freq:.3} vs bound {bound:.3} (+3sd {limit:.3})"
        ),
        details: json!({
            "runs": runs, "n": n, "s": s, "t": t,
            "bound": bound, "limit": limit, "max_frequency": max_freq,
            "failures": failures,
        }),
    }
}

/// Terminal-distribution bound: the empirical frequency of an external
/// atomic event over seeded runs stays within the orderable-set bound plus
/// three binomial standard deviations.
pub fn mt_distribution_suite(seed: u64, runs: u64) -> SuiteReport {
    let inst = toy_instance();
    let mu = MuVector::uniform(2, TOY_MU).expect("nonnegative");
    // Targets outside the bad-event list; the first disagrees with event 0
    // only, the second is disjoint from every event.
    let targets: Vec<Vec<(u32, u32)>> = vec![vec![(0, 1), (1, 1)], vec![(0, 1), (2, 1)]];
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for (ti, target) in targets.iter().enumerate() {
        let rep = lllmt_core::sequential::estimate_event_probability(
            &inst,
            &mu,
            target,
            runs,
            derive_seed(seed, 80, ti as u64),
            100_000,
        )
        .expect("valid targets");
        let sd = math::sqrt(rep.bound * (1.0 - rep.bound).max(0.0) / runs as f64);
        let limit = rep.bound + 3.0 * sd;
        if rep.frequency > limit {
            failures.push(format!(
                "target {ti}: frequency {} above bound {} (+3sd {limit})",
                rep.frequency, rep.bound
            ));
        }
        rows.push(json!({
            "target": target, "frequency": rep.frequency,
            "bound": rep.bound, "limit": limit,
        }));
    }
    SuiteReport {
        name: "mt-distribution",
        pass: failures.is_empty(),
        summary: format!(
            "{} targets over {} runs, {} violations",
            rows.len(),
            runs,
            failures.len()
        ),
        details: json!({ "runs": runs, "targets": rows, "failures": failures }),
    }
}

/// Parallel round scaling: calibrate c0 = max rounds/((1/eps) ln(W+2)) on a
/// training set, then fresh runs must stay within twice that in at least
/// 99% of cases.
pub fn round_scaling_suite(seed: u64, train: u64, fresh: u64, eps: f64) -> SuiteReport {
    let ratio_of = |tag: u64, i: u64| -> (f64, u32) {
        let (inst, _, w) = gen::slack_family_instance(derive_seed(seed, tag, i), eps);
        let s = derive_seed(seed, tag + 1, i);
        let res = run_full(&inst, s, 10_000);
        assert!(res.trace.terminated, "family instance failed to terminate");
        let denom = (1.0 / eps) * math::ln(w + 2.0);
        (res.trace.rounds as f64 / denom, res.trace.rounds)
    };
    let train_ratios: Vec<f64> = (0..train)
        .into_par_iter()
        .map(|i| ratio_of(100, i).0)
        .collect();
    let c0 = train_ratios.iter().cloned().fold(0.0f64, f64::max);
    let fresh_results: Vec<(f64, u32)> = (0..fresh)
        .into_par_iter()
        .map(|i| ratio_of(200, i))
        .collect();
    let within = fresh_results
        .iter()
        .filter(|&&(ratio, _)| ratio <= 2.0 * c0)
        .count() as u64;
    let need = (fresh as f64 * 0.99).ceil() as u64;
    let pass = within >= need;
    let max_rounds = fresh_results.iter().map(|&(_, r)| r).max().unwrap_or(0);
    SuiteReport {
        name: "round-scaling",
        pass,
        summary: format!(
            "c0 = {c0:.3}; {within}/{fresh} fresh runs within 2*c0 (need {need}); max rounds {max_rounds}"
        ),
        details: json!({
            "epsilon": eps, "c0": c0, "train": train, "fresh": fresh,
            "within": within, "need": need, "max_rounds": max_rounds,
        }),
    }
}

/// Vacuous-orderable enumeration sanity used by the stats CLI: families of
/// the Ramsey instance are exactly the empty set and the singleton.
pub fn enumeration_sanity_suite() -> SuiteReport {
    let (inst, _) = ramsey_build(6, 3, 10_000).expect("tiny");
    let mut pass = true;
    for id in 0..inst.event_count() {
        let ord = enumerate_orderable_sets(&inst, id, DEFAULT_ENUM_CAP).unwrap();
        let asg = enumerate_assignable_sets(&inst, id, DEFAULT_ENUM_CAP).unwrap();
        if ord != vec![Vec::new(), vec![id]] || asg != vec![Vec::new(), vec![id]] {
            pass = false;
        }
    }
    SuiteReport {
        name: "enumeration-sanity",
        pass,
        summary: "isolated events admit exactly the empty and singleton sets".into(),
        details: json!({}),
    }
}
