//! `h3nls` — scenario runner for the radial ℍ³ NLS laboratory.
//!
//! Exit codes: 0 all checks passed, 2 at least one check failed, 1 error.
//!
//! Environment overrides (flags take precedence): `H3NLS_OUT`,
//! `H3NLS_THREADS`, `H3NLS_SEED`.

mod config;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Config;
use scenarios::{run_scenario, RunContext, SCENARIOS};

#[derive(Parser)]
#[command(name = "h3nls", version, about = "Radial spectral laboratory for the quintic NLS on hyperbolic 3-space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// Configuration file (flat key/value with [sections]); defaults apply
    /// for every key the file omits.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for summaries and artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for data-parallel sections (0 = rayon default).
    #[arg(long)]
    threads: Option<usize>,
    /// Random seed override for corpus generation.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the scenario registry.
    ListScenarios,
    /// Strang split-step run with trajectory + diagnostics output.
    Simulate(RunArgs),
    /// Transform invariants: Plancherel, unitarity, semigroup, P_N calculus.
    TransformSelftest(RunArgs),
    /// Linear-flow decay exponents on both geometries.
    DispersiveTest(RunArgs),
    /// Morawetz weight identities, derivative identity and inequality.
    MorawetzTest(RunArgs),
    /// Refined Sobolev and local-smoothing constants with regression gate.
    SobolevTest(RunArgs),
    /// Scaling-limit comparison against rescaled Euclidean solutions.
    EuclidCompare(RunArgs),
    /// Profile decomposition of a field sequence.
    ProfileExtract(RunArgs),
    /// Fan-out of independent simulate runs.
    Sweep(RunArgs),
}

fn scenario_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::ListScenarios => "list-scenarios",
        Command::Simulate(_) => "simulate",
        Command::TransformSelftest(_) => "transform-selftest",
        Command::DispersiveTest(_) => "dispersive-test",
        Command::MorawetzTest(_) => "morawetz-test",
        Command::SobolevTest(_) => "sobolev-test",
        Command::EuclidCompare(_) => "euclid-compare",
        Command::ProfileExtract(_) => "profile-extract",
        Command::Sweep(_) => "sweep",
    }
}

fn env_path(name: &str) -> Option<PathBuf> {
    std::env::var_os(name).map(PathBuf::from)
}

fn run(args: &RunArgs, name: &str) -> anyhow::Result<bool> {
    let config = match &args.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let out_dir = args
        .out
        .clone()
        .or_else(|| env_path("H3NLS_OUT"))
        .unwrap_or_else(|| PathBuf::from("h3nls-out"));
    let seed_override = args.seed.or_else(|| {
        std::env::var("H3NLS_SEED").ok().and_then(|v| v.parse().ok())
    });
    let threads = args.threads.or_else(|| {
        std::env::var("H3NLS_THREADS").ok().and_then(|v| v.parse().ok())
    });
    #[cfg(feature = "parallel")]
    if let Some(k) = threads {
        if k > 0 {
            // a failure here just means a pool already exists; keep going
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    if threads.is_some() {
        eprintln!("warning: built without the `parallel` feature; --threads ignored");
    }
    let ctx = RunContext { out_dir, seed_override, verbose: args.verbose };
    run_scenario(name, &config, &ctx)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::ListScenarios => {
            for name in SCENARIOS {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
        cmd => {
            let args = match cmd {
                Command::Simulate(a)
                | Command::TransformSelftest(a)
                | Command::DispersiveTest(a)
                | Command::MorawetzTest(a)
                | Command::SobolevTest(a)
                | Command::EuclidCompare(a)
                | Command::ProfileExtract(a)
                | Command::Sweep(a) => a,
                Command::ListScenarios => unreachable!(),
            };
            match run(args, scenario_name(cmd)) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => {
                    eprintln!("one or more checks failed");
                    ExitCode::from(2)
                }
                Err(err) => {
                    eprintln!("error: {err:#}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
