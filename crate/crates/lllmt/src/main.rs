use clap::Parser;
use lllmt::cli::{run_cli, Cli};

fn main() {
    // LLLMT_WORKERS caps the worker threads used by batch suites.
    if let Ok(workers) = std::env::var("LLLMT_WORKERS") {
        if let Ok(n) = workers.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    std::process::exit(run_cli(cli));
}
