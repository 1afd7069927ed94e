//! Wave-operator approximation: reconstruct the interacting solution from
//! its scattering datum u_plus by solving backwards from the free state
//! U(T) u_plus across a dyadic ladder of horizons T. Reported:
//!
//! * Cauchy table: ||w_{2T}(0) - w_T(0)|| in H^1, L^2, L^{p+1} (decreasing);
//! * norm budget: mass identity and the energy's kinetic floor;
//! * forward convergence: ||w_{Tmax}(t) - U(t) u_plus||_{H^1} falling in t;
//! * round trip: forward-evolving w_T(0) back to U(T) u_plus.
//!
//! ```text
//! cargo run --release --example wave_operator [nls|hartree|linear]
//! ```
//!
//! The `linear` variant is a scheme control: backward reconstruction is the
//! exact inverse of the free flow, so every distance is round-off.

use dspl::baselines;
use dspl::config::ExperimentKind;
use dspl::runner::{run_document, RunOptions};
use std::path::PathBuf;

fn main() -> Result<(), dspl::error::Error> {
    let kind = std::env::args().nth(1).unwrap_or_else(|| "nls".to_string());
    let outcome = run_document(
        ExperimentKind::WaveOperator,
        &baselines::wave_operator_toml(&kind),
        &RunOptions {
            out: Some(PathBuf::from(format!("target/examples/wave-{kind}"))),
            ..RunOptions::default()
        },
    )?;
    println!("[{kind}] wave-operator experiment:");
    for line in &outcome.lines {
        println!("  {line}");
    }
    println!("tables: {}", outcome.out_dir.join("diagnostics.ndjson").display());
    assert!(outcome.passed);
    Ok(())
}
