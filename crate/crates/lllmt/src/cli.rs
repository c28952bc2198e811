//! Command-line interface: instance checking, application solvers,
//! parallel simulation, table and bound calculators, and the statistical
//! suites.
//!
//! Exit codes: 0 = solved/satisfied, 1 = criterion unsatisfied or the run
//! hit its budget, 2 = input error.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lllmt_core::apps::hamiltonian::{
    hamiltonian_build, hamiltonian_feasible, verify_dominating_independent, DEFAULT_P_RESOLUTION,
};
use lllmt_core::apps::hypergraph::hypergraph_build;
use lllmt_core::apps::ramsey::{
    branching_red_cliques, ramsey_blue_bound, ramsey_build, ramsey_solve,
};
use lllmt_core::apps::sat::{ksat_bounds, ksat_build};
use lllmt_core::apps::transversal::{
    extract_transversal, is_independent_transversal, transversal_alpha, transversal_build,
    transversal_threshold,
};
use lllmt_core::criteria::{
    check, find_mu_fixed_point, Criterion, FixedPointOutcome, MuVector, DEFAULT_DIVERGENCE_CAP,
    DEFAULT_MAX_ITERS,
};
use lllmt_core::model::Instance;
use lllmt_core::parallel::{run_hybrid, run_simplified, ParallelResult, DEFAULT_MAX_ROUNDS};
use lllmt_core::sequential::{run, LowestIdRule, RunResult, DEFAULT_MAX_STEPS};
use lllmt_core::DEFAULT_SEED;

use crate::formats;
use crate::json::{
    kind_from_name, log_to_jsonl, trace_to_jsonl, CriterionReportJson, KsatBoundsJson,
    RunStatsJson, SubRoundJson,
};
use crate::parexec::run_full_threaded;
use crate::suites;

#[derive(Parser, Debug)]
#[command(
    name = "lllmt",
    version,
    about = "Resampling solver for atomic bad-events over independent variables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Root seed for all randomness (a documented constant by default, so
    /// runs are reproducible).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the JSON result to this path as well as printing it.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a convergence criterion on an instance file.
    Check(CheckArgs),
    /// Solve a DIMACS CNF with the sequential resampler.
    SolveSat(SolveSatArgs),
    /// Properly color a k-uniform hypergraph.
    SolveHypergraph(SolveHypergraphArgs),
    /// Find an independent transversal of a partitioned graph.
    SolveTransversal(SolveFileArgs),
    /// Find a dominating independent set certifying a second Hamiltonian cycle.
    SolveHamiltonian(SolveFileArgs),
    /// Two-color K_n avoiding red s-cliques.
    SolveRamsey(SolveRamseyArgs),
    /// Run a parallel algorithm with a sub-round trace.
    SimulateParallel(SimulateArgs),
    /// Compute a vertex-capacitated maximal edge packing.
    Pack(PackArgs),
    /// Reproduce the hypergraph occurrence-bound table.
    TableHypergraph(TableArgs),
    /// Bound calculators.
    Bounds(BoundsArgs),
    /// Statistical and structural suites.
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// One of: symmetric, asymmetric, llll, llll-variable, pegden-lopsided,
    /// pegden-full, pegden-variable, blend, orderable, assignable.
    #[arg(long, default_value = "orderable")]
    pub kind: String,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    /// Weight source: "auto" (fixed-point search) or `uniform:<value>`.
    #[arg(long, default_value = "auto")]
    pub mu: String,
}

#[derive(Args, Debug)]
pub struct SolveSatArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
}

#[derive(Args, Debug)]
pub struct SolveHypergraphArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub colors: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
}

#[derive(Args, Debug)]
pub struct SolveFileArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
}

#[derive(Args, Debug)]
pub struct SolveRamseyArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 3)]
    pub s: u32,
    /// Blue clique size for the reported distribution bound.
    #[arg(long)]
    pub t: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    pub max_steps: u64,
    #[arg(long, default_value_t = 2_000_000)]
    pub event_cap: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Algo {
    Full,
    Simplified,
    Hybrid,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Full)]
    pub algo: Algo,
    #[arg(long, default_value_t = DEFAULT_MAX_ROUNDS)]
    pub max_rounds: u64,
    /// Write the sub-round trace as JSON lines to this path.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Use the threaded executor (bit-identical to the serial one).
    #[arg(long, default_value_t = false)]
    pub threaded: bool,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, default_value_t = 2)]
    pub c: u32,
    #[arg(long, default_value_t = 4)]
    pub kmin: u32,
    #[arg(long, default_value_t = 11)]
    pub kmax: u32,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// k-SAT occurrence bounds for clause size --k.
    #[arg(long)]
    pub ksat: bool,
    /// Hypergraph coloring bounds for --c colors and edge size --k.
    #[arg(long)]
    pub hypergraph: bool,
    /// Transversal threshold and weight for --b and --delta.
    #[arg(long)]
    pub transversal: bool,
    /// Hamiltonian two-weight feasibility at degree --k.
    #[arg(long)]
    pub hamiltonian: bool,
    /// Ramsey parameters and blue-clique bound for --n, --s, --t.
    #[arg(long)]
    pub ramsey: bool,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub c: Option<u32>,
    #[arg(long)]
    pub b: Option<u32>,
    #[arg(long)]
    pub delta: Option<u32>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long)]
    pub t: Option<u32>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// One of: table, ordering, orderable-assignable, witness-lemma,
    /// resample-bound, coupling, tree-height, vcmep, ksat, transversal,
    /// hamiltonian, ramsey, mt-distribution, round-scaling, enumeration,
    /// all.
    #[arg(long)]
    pub suite: String,
    /// Override the run/instance count where the suite takes one.
    #[arg(long)]
    pub runs: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PackAlgo {
    Greedy,
    Parallel,
}

#[derive(Args, Debug)]
pub struct PackArgs {
    /// Capacitated hypergraph file (`v`, `cap`, `edge` lines).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = PackAlgo::Greedy)]
    pub algo: PackAlgo,
    /// Rounding slack for the parallel algorithm, in (0, 1/2].
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
}

fn emit(output: &Option<PathBuf>, value: &Value) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    println!("{text}");
    if let Some(path) = output {
        fs::write(path, format!("{text}\n"))?;
    }
    Ok(())
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn timed_run(
    instance: &Instance,
    seed: u64,
    max_steps: u64,
) -> Result<RunResult, lllmt_core::error::RunError> {
    let started = Instant::now();
    let mut rule = LowestIdRule;
    let mut result = run(instance, &mut rule, seed, max_steps)?;
    result.stats.wall_seconds = started.elapsed().as_secs_f64();
    Ok(result)
}

/// Dispatch a parsed command line; returns the process exit code.
pub fn run_cli(cli: Cli) -> i32 {
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let outcome = match cli.command {
        Command::Check(args) => cmd_check(args, &cli.output),
        Command::SolveSat(args) => cmd_solve_sat(args, seed, &cli.output),
        Command::SolveHypergraph(args) => cmd_solve_hypergraph(args, seed, &cli.output),
        Command::SolveTransversal(args) => cmd_solve_transversal(args, seed, &cli.output),
        Command::SolveHamiltonian(args) => cmd_solve_hamiltonian(args, seed, &cli.output),
        Command::SolveRamsey(args) => cmd_solve_ramsey(args, seed, &cli.output),
        Command::SimulateParallel(args) => cmd_simulate(args, seed, &cli.output),
        Command::Pack(args) => cmd_pack(args, seed, &cli.output),
        Command::TableHypergraph(args) => cmd_table(args, &cli.output),
        Command::Bounds(args) => cmd_bounds(args, &cli.output),
        Command::Stats(args) => cmd_stats(args, seed, &cli.output),
    };
    match outcome {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("input error: {msg}");
            2
        }
        Err(CliError::Other(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

enum CliError {
    Input(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Other(e)
    }
}

fn input_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Input(msg.into()))
}

fn cmd_check(args: CheckArgs, output: &Option<PathBuf>) -> Result<i32, CliError> {
    let text = read_input(&args.input).map_err(CliError::Input)?;
    let instance = match formats::parse_instance(&text) {
        Ok(i) => i,
        Err(e) => return input_err(format!("{}: {e}", args.input.display())),
    };
    let Some(kind) = kind_from_name(&args.kind) else {
        return input_err(format!("unknown criterion kind '{}'", args.kind));
    };
    if args.epsilon < 0.0 {
        return input_err("epsilon must be nonnegative");
    }
    let crit = Criterion::with_epsilon(kind, args.epsilon);

    let mu = if args.mu == "auto" {
        match find_mu_fixed_point(&instance, &crit, DEFAULT_MAX_ITERS, DEFAULT_DIVERGENCE_CAP) {
            Ok(FixedPointOutcome::Found(mu)) => Some(mu),
            Ok(FixedPointOutcome::Failure(f)) => {
                emit(
                    output,
                    &json!({
                        "kind": args.kind,
                        "epsilon": args.epsilon,
                        "satisfied": false,
                        "mu_search": {
                            "found": false,
                            "iterations": f.iterations,
                            "diverged": f.diverged,
                        },
                    }),
                )
                .map_err(CliError::Other)?;
                return Ok(1);
            }
            Err(e) => return input_err(format!("criterion evaluation failed: {e}")),
        }
    } else if let Some(v) = args.mu.strip_prefix("uniform:") {
        let v: f64 = match v.parse() {
            Ok(v) if v >= 0.0 => v,
            _ => return input_err(format!("bad uniform weight '{v}'")),
        };
        Some(MuVector::uniform(instance.event_count(), v).expect("nonnegative"))
    } else {
        return input_err(format!(
            "bad --mu '{}', expected auto or uniform:<v>",
            args.mu
        ));
    };
    let mu = mu.expect("set above");
    let report = match check(&instance, &mu, &crit) {
        Ok(r) => r,
        Err(e) => return input_err(format!("criterion evaluation failed: {e}")),
    };
    let satisfied = report.satisfied;
    emit(
        output,
        &serde_json::to_value(CriterionReportJson::from(&report)).unwrap(),
    )
    .map_err(CliError::Other)?;
    Ok(if satisfied { 0 } else { 1 })
}

fn solve_exit(terminated: bool) -> i32 {
    if terminated {
        0
    } else {
        1
    }
}

fn cmd_solve_sat(args: SolveSatArgs, seed: u64, output: &Option<PathBuf>) -> Result<i32, CliError> {
    let text = read_input(&args.input).map_err(CliError::Input)?;
    let (n, clauses) = match formats::parse_dimacs(&text) {
        Ok(x) => x,
        Err(e) => return input_err(format!("{}: {e}", args.input.display())),
    };
    let (instance, cfg) = match ksat_build(&clauses, n) {
        Ok(x) => x,
        Err(e) => return input_err(format!("cannot build instance: {e}")),
    };
    if !cfg.within_bound {
        eprintln!(
            "warning: occurrence bound L = {} exceeds the criterion bound {:.3}; solving anyway",
            cfg.l_max, cfg.l_bound
        );
    }
    let mu = MuVector::uniform(instance.event_count(), cfg.alpha).expect("alpha >= 0");
    let blend = check(
        &instance,
        &mu,
        &Criterion::new(lllmt_core::criteria::CriterionKind::BlendClosedForm),
    )
    .expect("closed form");
    let res = timed_run(&instance, seed, args.max_steps)
        .map_err(|e| CliError::Input(format!("run failed: {e}")))?;
    let assignment: Vec<u32> = res.assignment.values().to_vec();
    emit(
        output,
        &json!({
            "solved": res.stats.terminated,
            "stats": RunStatsJson::from(&res.stats),
            "assignment": assignment,
            "config": {
                "k": cfg.k, "l_max": cfg.l_max, "alpha": cfg.alpha, "x": cfg.x,
                "l_bound": cfg.l_bound, "within_bound": cfg.within_bound,
            },
            "blend_criterion_satisfied": blend.satisfied,
        }),
    )
    .map_err(CliError::Other)?;
    Ok(solve_exit(res.stats.terminated))
}

fn cmd_solve_hypergraph(
    args: SolveHypergraphArgs,
    seed: u64,
    output: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let text = read_input(&args.input).map_err(CliError::Input)?;
    let file = match formats::parse_hypergraph(&text) {
        Ok(x) => x,
        Err(e) => return input_err(format!("{}: {e}", args.input.display())),
    };
    let (instance, cfg) = match hypergraph_build(&file.edges, file.vertices, args.colors) {
        Ok(x) => x,
        Err(e) => return input_err(format!("cannot build instance: {e}")),
    };
    let res = timed_run(&instance, seed, args.max_steps)
        .map_err(|e| CliError::Input(format!("run failed: {e}")))?;
    let coloring: Vec<u32> = res.assignment.values().to_vec();
    emit(
        output,
        &json!({
            "solved": res.stats.terminated,
            "stats": RunStatsJson::from(&res.stats),
            "coloring": coloring,
            "config": {
                "k": cfg.k, "colors": cfg.colors, "l_max": cfg.l_max, "alpha": cfg.alpha,
            },
        }),
    )
    .map_err(CliError::Other)?;
    Ok(solve_exit(res.stats.terminated))
}

fn cmd_solve_transversal(
    args: SolveFileArgs,
    seed: u64,
    output: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let text = read_input(&args.input).map_err(CliError::Input)?;
    let file = match formats::parse_graph(&text) {
        Ok(x) => x,
        Err(e) => return input_err(format!("{}: {e}", args.input.display())),
    };
    if file.classes.is_empty() {
        return input_err("transversal input needs class lines");
    }
    let (instance, cfg) = match transversal_build(file.vertices, &file.edges, &file.classes) {
        Ok(x) => x,
        Err(e) => return input_err(format!("cannot build instance: {e}")),
    };
    let res = timed_run(&instance, seed, args.max_steps)
        .map_err(|e| CliError::Input(format!("run failed: {e}")))?;
    let chosen = extract_transversal(&res.assignment, &file.classes);
    let independent = is_independent_transversal(&chosen, &file.edges);
    emit(
        output,
        &json!({
            "solved": res.stats.terminated && independent,
            "stats": RunStatsJson::from(&res.stats),
            "transversal": chosen,
            "config": {
                "classes": cfg.classes, "class_size": cfg.class_size,
                "max_degree": cfg.max_degree, "alpha": cfg.alpha,
                "threshold_class_size": transversal_threshold(cfg.max_degree.max(1)),
                "dropped_intra_class": cfg.dropped_intra_class,
            },
        }),
    )
    .map_err(CliError::Other)?;
    Ok(solve_exit(res.stats.terminated && independent))
}

fn cmd_solve_hamiltonian(
    args: SolveFileArgs,
    seed: u64,
    output: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let text = read_input(&args.input).map_err(CliError::Input)?;
    let file = match formats::parse_graph(&text) {
        Ok(x) => x,
        Err(e) => return input_err(format!("{}: {e}", args.input.display())),
    };
    let Some(cycle) = file.cycle.clone() else {
        return input_err("hamiltonian input needs a cycle line");
    };
    let (instance, cfg) = match hamiltonian_build(file.vertices, &file.edges, &cycle) {
        Ok(x) => x,
        Err(e) => return input_err(format!("cannot build instance: {e}")),
    };
    if cfg.weights.is_none() {
        eprintln!(
            "warning: the two-weight criterion has no certificate at k = {}; solving anyway",
            cfg.k
        );
    }
    let res = timed_run(&instance, seed, args.max_steps)
        .map_err(|e| CliError::Input(format!("run failed: {e}")))?;
    let in_s: Vec<bool> = (0..file.vertices)
        .map(|v| res.assignment.get(v) == 1)
        .collect();
    let verified = res.stats.terminated
        && verify_dominating_independent(file.vertices, &file.edges, &cycle, &in_s);
    let s_set: Vec<u32> = (0..file.vertices as u32)
        .filter(|&v| in_s[v as usize])
        .collect();
    emit(
        output,
        &json!({
            "solved": verified,
            "stats": RunStatsJson::from(&res.stats),
            "s_set": s_set,
            "config": {
                "k": cfg.k,
                "weights": cfg.weights.map(|w| json!({"p": w.p, "a": w.a, "b": w.b})),
            },
        }),
    )
    .map_err(CliError::Other)?;
    Ok(solve_exit(verified))
}

fn cmd_solve_ramsey(
    args: SolveRamseyArgs,
    seed: u64,
    output: &Option<PathBuf>,
) -> Result<i32, CliError> {
    let (instance, cfg) = match ramsey_build(args.n, args.s, args.event_cap) {
        Ok(x) => x,
        Err(e) => return input_err(format!("cannot build instance: {e}")),
    };
    let started = Instant::now();
    let mut res = match ramsey_solve(&instance, &cfg, seed, args.max_steps) {
        Ok(r) => r,
        Err(e) => return input_err(format!("run failed: {e}")),
    };
    res.stats.wall_seconds = started.elapsed().as_secs_f64();
    let red_left = branching_red_cliques(args.n, args.s, &res.assignment).len();
    let t = args.t.unwrap_or(args.s + 2);
    emit(
        output,
        &json!({
            "solved": res.stats.terminated && red_left == 0,
            "stats": RunStatsJson::from(&res.stats),
            "red_cliques_remaining": red_left,
            "coloring": res.assignment.values(),
            "config": {
                "n": cfg.n, "s": cfg.s, "p": cfg.p, "q": cfg.q, "mu": cfg.mu,
                "c_s": cfg.c_s, "c_s_prime": cfg.c_s_prime,
                "t": t, "blue_bound": ramsey_blue_bound(args.n, args.s, t),
            },
        }),
    )
    .map_err(CliError::Other)?;
    Ok(solve_exit(res.stats.terminated && red_left == 0))
}

fn cmd_simulate(args: SimulateArgs, seed: u64, output: &Option<PathBuf>) -> Result<i32, CliError> {
    let text = read_input(&args.input).map_err(CliError::Input)?;
    let instance = match formats::parse_instance(&text) {
        Ok(i) => i,
        Err(e) => return input_err(format!("{}: {e}", args.input.display())),
    };
    let started = Instant::now();
    let (result, log_lines): (ParallelResult, Option<String>) = match args.algo {
        Algo::Full => {
            let r = if args.threaded {
                run_full_threaded(&instance, seed, args.max_rounds)
            } else {
                lllmt_core::parallel::run_full(&instance, seed, args.max_rounds)
            };
            (r, None)
        }
        Algo::Simplified => (run_simplified(&instance, seed, args.max_rounds), None),
        Algo::Hybrid => {
            let h = run_hybrid(&instance, seed, args.max_rounds);
            let lines = log_to_jsonl(&h.log);
            (
                ParallelResult {
                    assignment: h.assignment,
                    trace: h.trace,
                },
                Some(lines),
            )
        }
    };
    let wall = started.elapsed().as_secs_f64();
    if let Some(path) = &args.trace {
        fs::write(path, trace_to_jsonl(&result.trace))
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    if result.trace.psi_warning {
        eprintln!(
            "warning: switching margin psi = {:.3e} is ~0; the simplified bound degenerates",
            result.trace.psi
        );
    }
    let sub_rounds: Vec<SubRoundJson> = result
        .trace
        .sub_rounds
        .iter()
        .map(SubRoundJson::from)
        .collect();
    emit(
        output,
        &json!({
            "terminated": result.trace.terminated,
            "rounds": result.trace.rounds,
            "sub_rounds": sub_rounds.len(),
            "psi": result.trace.psi,
            "wall_seconds": wall,
            "assignment": result.assignment.values(),
            "trace": sub_rounds,
            "hybrid_log": log_lines,
        }),
    )
    .map_err(CliError::Other)?;
    Ok(solve_exit(result.trace.terminated))
}

fn cmd_pack(args: PackArgs, seed: u64, output: &Option<PathBuf>) -> Result<i32, CliError> {
    let text = read_input(&args.input).map_err(CliError::Input)?;
    let g = match formats::parse_hypergraph(&text).and_then(|f| f.into_capacitated()) {
        Ok(g) => g,
        Err(e) => return input_err(format!("{}: {e}", args.input.display())),
    };
    use lllmt_core::vcmep::{natural_order, vcmep_greedy, vcmep_parallel_sim};
    let (packing, rounds, terminated) = match args.algo {
        PackAlgo::Greedy => (vcmep_greedy(&g, &natural_order(&g)), 0usize, true),
        PackAlgo::Parallel => {
            let res = match vcmep_parallel_sim(&g, seed, args.eps, None) {
                Ok(r) => r,
                Err(e) => return input_err(format!("packing failed: {e}")),
            };
            (res.packing, res.rounds.len(), res.terminated)
        }
    };
    let maximal = packing.is_maximal(&g) && packing.is_feasible(&g);
    emit(
        output,
        &json!({
            "selected": packing.selected,
            "load": packing.load,
            "maximal": maximal,
            "rounds": rounds,
            "terminated": terminated,
        }),
    )
    .map_err(CliError::Other)?;
    Ok(if terminated && maximal { 0 } else { 1 })
}

fn cmd_table(args: TableArgs, output: &Option<PathBuf>) -> Result<i32, CliError> {
    if !(2..=64).contains(&args.c) || args.kmin < 2 || args.kmax < args.kmin || args.kmax > 40 {
        return input_err("need c in 2..=64 and 2 <= kmin <= kmax <= 40");
    }
    let rows = suites::hypergraph_table(args.c, args.kmin, args.kmax);
    println!("k   L(new)  L'(original)");
    for row in &rows {
        println!("{:<3} {:<7} {:<7}", row.k, row.l_new, row.l_original);
    }
    emit(output, &json!({ "c": args.c, "rows": rows })).map_err(CliError::Other)?;
    Ok(0)
}

fn cmd_bounds(args: BoundsArgs, output: &Option<PathBuf>) -> Result<i32, CliError> {
    let modes = [
        args.ksat,
        args.hypergraph,
        args.transversal,
        args.hamiltonian,
        args.ramsey,
    ];
    if modes.iter().filter(|&&m| m).count() != 1 {
        return input_err(
            "pick exactly one of --ksat --hypergraph --transversal --hamiltonian --ramsey",
        );
    }
    let value = if args.ksat {
        let Some(k) = args.k else {
            return input_err("--ksat needs --k");
        };
        if !(2..=64).contains(&k) {
            return input_err("--k must lie in 2..=64");
        }
        let b = ksat_bounds(k);
        serde_json::to_value(KsatBoundsJson {
            k,
            l_new: b.l_new,
            l_gst: b.l_gst,
        })
        .unwrap()
    } else if args.hypergraph {
        let (Some(c), Some(k)) = (args.c, args.k) else {
            return input_err("--hypergraph needs --c and --k");
        };
        if !(2..=64).contains(&c) || !(2..=40).contains(&k) {
            return input_err("need c in 2..=64 and k in 2..=40");
        }
        use lllmt_core::apps::hypergraph::{
            hypergraph_alpha, hypergraph_lmax, HypergraphCriterion,
        };
        let l_new = hypergraph_lmax(c, k, HypergraphCriterion::New);
        let l_orig = hypergraph_lmax(c, k, HypergraphCriterion::Original);
        json!({
            "c": c, "k": k, "l_new": l_new, "l_original": l_orig,
            "alpha_at_l_new": hypergraph_alpha(c, k, l_new, HypergraphCriterion::New),
        })
    } else if args.transversal {
        let (Some(b), Some(delta)) = (args.b, args.delta) else {
            return input_err("--transversal needs --b and --delta");
        };
        if delta == 0 {
            return input_err("--delta must be positive");
        }
        json!({
            "b": b, "delta": delta,
            "threshold": transversal_threshold(delta),
            "alpha": transversal_alpha(b, delta),
        })
    } else if args.hamiltonian {
        let Some(k) = args.k else {
            return input_err("--hamiltonian needs --k");
        };
        if !(3..=500).contains(&k) {
            return input_err("--k must lie in 3..=500");
        }
        let w = hamiltonian_feasible(k, DEFAULT_P_RESOLUTION);
        json!({
            "k": k,
            "feasible": w.is_some(),
            "weights": w.map(|w| json!({"p": w.p, "a": w.a, "b": w.b})),
        })
    } else {
        let (Some(n), Some(s)) = (args.n, args.s) else {
            return input_err("--ramsey needs --n and --s");
        };
        if s < 3 || n < s {
            return input_err("need s >= 3 and n >= s");
        }
        let cfg = lllmt_core::apps::ramsey::ramsey_params(n, s);
        let t = args.t.unwrap_or(s + 2);
        json!({
            "n": n, "s": s, "t": t,
            "p": cfg.p, "q": cfg.q, "mu": cfg.mu,
            "c_s": cfg.c_s, "c_s_prime": cfg.c_s_prime,
            "blue_bound": ramsey_blue_bound(n, s, t),
        })
    };
    emit(output, &value).map_err(CliError::Other)?;
    Ok(0)
}

fn cmd_stats(args: StatsArgs, seed: u64, output: &Option<PathBuf>) -> Result<i32, CliError> {
    let runs = args.runs;
    let reports: Vec<suites::SuiteReport> = match args.suite.as_str() {
        "table" => vec![suites::table_suite()],
        "ordering" => vec![suites::criterion_ordering_suite(seed, runs.unwrap_or(500))],
        "orderable-assignable" => {
            vec![suites::orderable_assignable_suite(
                seed,
                runs.unwrap_or(500),
            )]
        }
        "witness-lemma" => vec![suites::witness_lemma_suite(seed, runs.unwrap_or(100_000))],
        "resample-bound" => vec![suites::resample_bound_suite(seed, runs.unwrap_or(10_000))],
        "coupling" => vec![suites::coupling_suite(seed, runs.unwrap_or(20), 5)],
        "tree-height" => vec![suites::tree_height_suite(seed, runs.unwrap_or(50))],
        "vcmep" => vec![suites::vcmep_suite(seed, runs.unwrap_or(1000))],
        "ksat" => vec![suites::ksat_suite(seed, runs.unwrap_or(100))],
        "transversal" => vec![suites::transversal_suite(seed, runs.unwrap_or(50))],
        "hamiltonian" => vec![suites::hamiltonian_suite()],
        "ramsey" => vec![suites::ramsey_suite(seed, runs.unwrap_or(100))],
        "mt-distribution" => vec![suites::mt_distribution_suite(seed, runs.unwrap_or(10_000))],
        "round-scaling" => {
            vec![suites::round_scaling_suite(
                seed,
                20,
                runs.unwrap_or(100),
                0.5,
            )]
        }
        "enumeration" => vec![suites::enumeration_sanity_suite()],
        "all" => vec![
            suites::table_suite(),
            suites::criterion_ordering_suite(seed, 500),
            suites::orderable_assignable_suite(seed, 500),
            suites::witness_lemma_suite(seed, 100_000),
            suites::resample_bound_suite(seed, 10_000),
            suites::coupling_suite(seed, 20, 5),
            suites::tree_height_suite(seed, 50),
            suites::vcmep_suite(seed, 1000),
            suites::ksat_suite(seed, 100),
            suites::transversal_suite(seed, 50),
            suites::hamiltonian_suite(),
            suites::ramsey_suite(seed, 100),
            suites::mt_distribution_suite(seed, 10_000),
            suites::round_scaling_suite(seed, 20, 100, 0.5),
            suites::enumeration_sanity_suite(),
        ],
        other => return input_err(format!("unknown suite '{other}'")),
    };
    let mut all_pass = true;
    for r in &reports {
        println!(
            "{}: {} — {}",
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.summary
        );
        all_pass &= r.pass;
    }
    let value = json!({
        "seed": seed,
        "pass": all_pass,
        "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    });
    emit(output, &value).map_err(CliError::Other)?;
    Ok(if all_pass { 0 } else { 1 })
}
