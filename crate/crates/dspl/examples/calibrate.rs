//! Regenerates the measurements behind the pinned constants in
//! `dspl::baselines`.
//!
//! ```text
//! cargo run --release --example calibrate [estimates|decay|wave|all]
//! ```
//!
//! Prints every measured ratio/slope next to the pinned ceiling/band so the
//! constants can be re-derived (ceiling = measured * 1.25, floor =
//! measured * 0.5) after an intentional change of the pinned configurations.

use dspl::baselines;
use dspl::config::ExperimentKind;
use dspl::runner::{run_document, RunOptions, RunOutcome};
use std::path::PathBuf;
use std::time::Instant;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "all".to_string());
    let base = PathBuf::from("target/calibrate");

    if matches!(which.as_str(), "estimates" | "all") {
        for kind in ["nls", "hartree"] {
            section(
                &format!("verify-estimates [{kind}]"),
                ExperimentKind::VerifyEstimates,
                &baselines::estimates_toml(kind),
                base.join(format!("estimates-{kind}")),
            );
        }
    }
    if matches!(which.as_str(), "decay" | "all") {
        for kind in ["nls", "hartree"] {
            section(
                &format!("decay-probe [{kind}]"),
                ExperimentKind::DecayProbe,
                &baselines::decay_toml(kind),
                base.join(format!("decay-{kind}")),
            );
        }
    }
    if matches!(which.as_str(), "wave" | "all") {
        for kind in ["nls", "hartree", "linear"] {
            section(
                &format!("wave-operator [{kind}]"),
                ExperimentKind::WaveOperator,
                &baselines::wave_operator_toml(kind),
                base.join(format!("wave-{kind}")),
            );
        }
    }
}

fn section(title: &str, verb: ExperimentKind, config: &str, out: PathBuf) {
    println!("== {title} ==");
    let opts = RunOptions {
        out: Some(out),
        ..RunOptions::default()
    };
    let start = Instant::now();
    match run_document(verb, config, &opts) {
        Ok(RunOutcome { lines, passed, .. }) => {
            for line in lines {
                println!("   {line}");
            }
            println!(
                "   => {} in {:.1}s",
                if passed { "all checks passed" } else { "CHECKS FAILED" },
                start.elapsed().as_secs_f64()
            );
        }
        Err(e) => println!("   error: {e}"),
    }
    println!();
}
