use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sdn_eigen::experiment::{run_experiment, run_suite, ExperimentConfig, Suite};
use sdn_eigen::graph::Graph;

#[derive(Parser)]
#[command(name = "sdn-eigen", version, about = "Distributed preconditioned eigenvector iterations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a connected random geometric graph.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a multi-trial experiment and write averaged CE/NR curves as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the configured trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Overrides the configured output path; stdout when neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a property suite and print a JSON report.
    Check {
        /// theorem1, theorem2, alg4, oracle or equivalence
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Invalid(String),
    Property,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".summary.json");
    out.with_file_name(name)
}

fn gen(n: usize, seed: u64, out: &Path) -> Result<(), Failure> {
    let g = Graph::random_geometric(n, seed)?;
    g.save(out)?;
    println!("vertices {} edges {} mean_degree {:.4}", g.n(), g.edge_count(), g.mean_degree());
    Ok(())
}

fn run(config: &Path, trials: Option<usize>, out: Option<PathBuf>) -> Result<(), Failure> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(t) = trials {
        cfg.trials = t;
    }
    let out = out.or_else(|| cfg.output.clone());
    let report = run_experiment(&cfg)?;
    let csv = report.curves.to_csv();
    let summary = report.summary.to_json();
    match &out {
        Some(path) => {
            fs::write(path, csv)?;
            fs::write(sidecar(path), summary + "\n")?;
        }
        None => {
            print!("{csv}");
            eprintln!("{summary}");
        }
    }
    let failed: Vec<String> = report
        .summary
        .failures()
        .map(|a| format!("{}: {}", a.algorithm, a.error.as_deref().unwrap_or_default()))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invalid(failed.join("; ")))
    }
}

fn check(suite: &str, seed: u64) -> Result<(), Failure> {
    let report = run_suite(Suite::parse(suite)?, seed)?;
    println!("{}", report.to_json());
    if report.passed {
        Ok(())
    } else {
        for p in report.failures() {
            eprintln!("FAIL {} seed {} margin {:e}", p.property, p.instance_seed, p.margin);
        }
        Err(Failure::Property)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Gen { n, seed, out } => gen(n, seed, &out),
        Command::Run { config, trials, out } => run(&config, trials, out),
        Command::Check { suite, seed } => check(&suite, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Property) => ExitCode::from(2),
    }
}
