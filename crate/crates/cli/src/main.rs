//! `novas`: nonparametric variable selection from the command line.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 malformed input data,
//! 3 invalid flags or configuration.

mod commands;
mod config;
mod error;
mod ingest;
mod trace;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(
    name = "novas",
    version,
    about = "Nonparametric variable selection by cross-validated local linear regression"
)]
struct Cli {
    /// Worker threads; 0 uses one per available core [default: 0]
    #[arg(long, global = true, env = "NOVAS_THREADS")]
    threads: Option<usize>,

    /// TOML run configuration; command-line flags override its values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Select covariates for a response column in a delimited file
    Select(SelectArgs),
    /// Run replicated selections on a simulated model
    Simulate(SimulateArgs),
    /// Time fixed-stage NOVAS runs over several dimensions
    Benchmark(BenchmarkArgs),
    /// Re-render the summary table of a saved selection trace
    Summarize(SummarizeArgs),
}

/// Search settings shared by `select` and `simulate`.
#[derive(Debug, Args)]
struct SearchArgs {
    /// Minimum relative gain needed to accept another stage [default: 0.05]
    #[arg(long)]
    threshold: Option<f64>,

    /// Computing budget q; keeps max(2, floor(sqrt(q))) subsets per stage [default: p]
    #[arg(long)]
    budget_q: Option<usize>,

    /// Upper limit on the number of stages [default: 10]
    #[arg(long)]
    max_stages: Option<usize>,

    /// Run exactly this many stages, ignoring the gain rule
    #[arg(long)]
    stages: Option<usize>,

    /// Comma-separated bandwidth multipliers of n^(-1/(d+4)) [default: 0.3,0.5,0.8,1.2,1.8,2.7]
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    grid: Option<Vec<f64>>,

    /// Residual weight: `unit`, or `box:LO,HI` to count only points whose
    /// standardized coordinates lie in [LO, HI] [default: unit]
    #[arg(long)]
    weight: Option<String>,
}

#[derive(Debug, Args)]
struct SelectArgs {
    /// Delimited text file with a header row
    #[arg(long, value_name = "FILE")]
    data: PathBuf,

    /// Response column, by header name or 1-based position [default: last column]
    #[arg(long)]
    response: Option<String>,

    /// Field delimiter (`comma`, `tab` or one character) [default: detected from the header]
    #[arg(long)]
    delimiter: Option<String>,

    /// Search method: novas or mpdp
    #[arg(long, default_value = "novas")]
    selector: String,

    #[command(flatten)]
    search: SearchArgs,

    /// Write the JSON-lines trace to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Candidates recorded per stage in the trace
    #[arg(long, default_value_t = 5)]
    top: usize,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Model: m1, m2, m3, m4, m5 or alpha_family [default: m1]
    #[arg(long)]
    model: Option<String>,

    /// Sample size [default: 100]
    #[arg(long)]
    n: Option<usize>,

    /// Number of covariates [default: 100]
    #[arg(long)]
    p: Option<usize>,

    /// Noise-to-signal variance ratio [default: 0.05]
    #[arg(long)]
    nsr: Option<f64>,

    /// Interaction weight of the alpha family [default: 0.35]
    #[arg(long)]
    alpha: Option<f64>,

    /// Replace the last covariate by X1^2 |X2|^(1/3)
    #[arg(long)]
    trap: bool,

    /// Seed of the first replication; replication r uses seed + r [default: 0]
    #[arg(long)]
    seed: Option<u64>,

    /// Number of replications [default: 100]
    #[arg(long)]
    reps: Option<u32>,

    /// Search method: novas, mpdp or both
    #[arg(long, default_value = "novas")]
    selector: String,

    #[command(flatten)]
    search: SearchArgs,

    /// Write the reports as JSON lines to this file instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    /// Comma-separated dimensions, at least two [default: 100,500,1000]
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    p_list: Option<Vec<usize>>,

    /// Sample size [default: 100]
    #[arg(long)]
    n: Option<usize>,

    /// Stages run per selection [default: 4]
    #[arg(long)]
    stages: Option<usize>,

    /// Timed runs per dimension; the fastest is reported [default: 1]
    #[arg(long)]
    repeats: Option<usize>,

    /// Data seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,

    /// Write the report as JSON to this file instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SummarizeArgs {
    /// JSON-lines trace written by `select --out`
    #[arg(long, value_name = "FILE")]
    trace: PathBuf,
}

fn run(cli: Cli) -> CliResult<()> {
    let config = RunConfig::load(cli.config.as_deref())?;
    let threads = cli.threads.or(config.threads).unwrap_or(0);
    match cli.command {
        Command::Select(args) => commands::select(args, config, threads),
        Command::Simulate(args) => commands::simulate(args, config, threads),
        Command::Benchmark(args) => commands::benchmark(args, config, threads),
        Command::Summarize(args) => commands::summarize(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("novas: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
