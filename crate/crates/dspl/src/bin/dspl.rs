//! Command-line driver. All logic lives in the library; this binary parses
//! arguments, dispatches to [`dspl::runner`], prints the outcome and maps
//! errors to exit codes: 0 ok, 2 config error, 3 numerical abort,
//! 4 verification failure.

use clap::{Args, Parser, Subcommand};
use dspl::config::ExperimentKind;
use dspl::error::Error;
use dspl::runner::{run_document, run_sweep, RunOptions, RunOutcome};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dspl",
    version,
    about = "2-D pseudospectral simulator and estimate-verification harness \
             for defocusing Schrodinger-type equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the configured equation and record diagnostics.
    Simulate(CommonArgs),
    /// Run the estimate checkers (positivity sweeps, correlation and
    /// interpolated space-time bounds, convolution inequality).
    Verify(CommonArgs),
    /// Reconstruct the solution from scattering data across a horizon ladder.
    #[command(name = "wave-operator")]
    WaveOperator(CommonArgs),
    /// Fit free-flow decay exponents and weak-decay pairing integrals.
    Decay(CommonArgs),
    /// Run the cross product of the [sweep] axes and aggregate a CSV table.
    Sweep(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// TOML configuration file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory (defaults to the config's output.directory, then "out").
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Seed for randomized checkers (mandatory in verify mode).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Abort (exit 3) when mass reaches the box boundary instead of warning.
    #[arg(long)]
    strict_boundary: bool,
    /// Write a binary checkpoint every N steps (multiple of the record cadence).
    #[arg(long, value_name = "N")]
    checkpoint_every: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (verb, args) = match &cli.command {
        Command::Simulate(a) => (Some(ExperimentKind::Simulate), a),
        Command::Verify(a) => (Some(ExperimentKind::VerifyEstimates), a),
        Command::WaveOperator(a) => (Some(ExperimentKind::WaveOperator), a),
        Command::Decay(a) => (Some(ExperimentKind::DecayProbe), a),
        Command::Sweep(a) => (None, a),
    };
    let opts = RunOptions {
        out: args.out.clone(),
        seed: args.seed,
        strict_boundary: args.strict_boundary,
        checkpoint_every: args.checkpoint_every,
    };
    let text = match std::fs::read_to_string(&args.config) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let result = match verb {
        Some(verb) => run_document(verb, &text, &opts),
        None => run_sweep(&text, &opts),
    };
    match result {
        Ok(outcome) => report(&outcome),
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn report(outcome: &RunOutcome) -> ExitCode {
    println!("experiment: {}", outcome.experiment);
    println!("output: {}", outcome.out_dir.display());
    for line in &outcome.lines {
        println!("  {line}");
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "verification failed: {} of {} checks passed",
            outcome.checks_passed, outcome.checks_total
        );
        ExitCode::from(4)
    }
}

fn exit_code(e: &Error) -> ExitCode {
    ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(1))
}
