//! Weak time decay of the nonlinearity paired against free waves: the
//! integrals
//!
//!     I(s) = | int_s^{2s} <N(u(t)), U(t) psi> dt |
//!
//! over dyadic windows decrease in s (the pairing is integrable in time);
//! the fitted rate beta and the short-window growth exponent are reported.
//!
//! ```text
//! cargo run --release --example weak_decay_ladder [nls|hartree]
//! ```

use dspl::baselines;
use dspl::config::ExperimentKind;
use dspl::runner::{run_document, RunOptions};
use std::path::PathBuf;

fn main() -> Result<(), dspl::error::Error> {
    let kind = std::env::args().nth(1).unwrap_or_else(|| "nls".to_string());
    let outcome = run_document(
        ExperimentKind::DecayProbe,
        &baselines::decay_toml(&kind),
        &RunOptions {
            out: Some(PathBuf::from(format!("target/examples/decay-{kind}"))),
            ..RunOptions::default()
        },
    )?;
    println!("[{kind}] decay probe:");
    for line in &outcome.lines {
        println!("  {line}");
    }
    println!("report: {}", outcome.out_dir.join("reports.json").display());
    assert!(outcome.passed);
    Ok(())
}
