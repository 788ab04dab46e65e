//! `wlmap`: fit workload/resource regressions, inspect residuals, compute
//! the optimal workload–resource matrix and replay allocation scripts.
//!
//! Exit status: 0 on success, 1 on a domain error (singular design, missing
//! model, failed expectation, ...), 2 on usage, I/O or parse errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wlmap_core::trace_io::Precision;

#[derive(Debug, Parser)]
#[command(name = "wlmap", version, about = "Workload/resource regression and mapping")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit r = mu0 + mu1 * w per (resource, workload) pair.
    Fit(FitArgs),
    /// Print fitted values and residuals for one pair.
    Residuals(ResidualsArgs),
    /// Assign workloads to resources by minimum predicted cost.
    Allocate(AllocateArgs),
    /// Run a replay script against the allocation state machine.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Significant digits for numbers, or `full` for lossless output.
    #[arg(long, default_value = "6", value_parser = parse_precision)]
    precision: Precision,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("selection").required(true).args(["pair", "all"])))]
pub struct FitArgs {
    /// Observation CSV (`resource,workload,w,r`).
    #[arg(long)]
    input: PathBuf,
    /// A single pair as `<resource>:<workload>`.
    #[arg(long)]
    pair: Option<String>,
    /// Fit every pair in the input, in lexicographic order.
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ResidualsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    pair: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AllocateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Demand level at which every model is evaluated.
    #[arg(long = "at", allow_negative_numbers = true)]
    at: f64,
    /// Comma-separated resource names, in display order.
    #[arg(long)]
    resources: String,
    /// Comma-separated workload names, in display order.
    #[arg(long)]
    workloads: String,
    /// Write the resulting allocation state here.
    #[arg(long)]
    snapshot: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    script: PathBuf,
    /// Write the final state here when every expectation holds.
    #[arg(long)]
    snapshot_out: Option<PathBuf>,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    if s == "full" {
        return Ok(Precision::Full);
    }
    match s.parse::<usize>() {
        Ok(d) if (1..=17).contains(&d) => Ok(Precision::Significant(d)),
        _ => Err("expected `full` or a digit count between 1 and 17".into()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let mut stdout = String::new();
    let result = match &cli.command {
        Command::Fit(args) => commands::fit(args, &mut stdout),
        Command::Residuals(args) => commands::residuals(args, &mut stdout),
        Command::Allocate(args) => commands::allocate(args, &mut stdout),
        Command::Replay(args) => commands::replay(args, &mut stdout),
    };
    print!("{stdout}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
