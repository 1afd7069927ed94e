//! Binary checkpoints: run with a checkpoint cadence, restart from the
//! mid-run state via a `profile.kind = "file"` config, and confirm the
//! restarted run reproduces the original final state. Checkpoints are cut at
//! record boundaries, where the integrator closes its fused half-steps, so
//! restarting is exactly equivalent to having continued.
//!
//! ```text
//! cargo run --release --example checkpoint_restart
//! ```

use dspl::baselines;
use dspl::checkpoint::read_checkpoint;
use dspl::config::ExperimentKind;
use dspl::runner::{run_document, RunOptions};
use dspl::spectral::sobolev_norm;
use std::path::PathBuf;

fn main() -> Result<(), dspl::error::Error> {
    let dir = PathBuf::from("target/examples/checkpoint-restart");

    // 50 steps at cadence 5; checkpoints every 25 steps.
    run_document(
        ExperimentKind::Simulate,
        baselines::SMOKE_TOML,
        &RunOptions {
            out: Some(dir.join("full")),
            checkpoint_every: Some(25),
            ..RunOptions::default()
        },
    )?;
    let (final_full, t_full, _) = read_checkpoint(&dir.join("full/final.dspl"))?;
    let (mid, t_mid, eq) = read_checkpoint(&dir.join("full/checkpoint-00000025.dspl"))?;
    println!("checkpoint at t = {t_mid}, equation {}", eq.name());

    // Restart: same equation and step size, half the horizon, state from disk.
    let restart_toml = format!(
        r#"
        [equation]
        kind = "nls"
        p = 2.5

        [grid]
        n = 64
        box_length = 20.0

        [solver]
        dt = 1e-2
        horizon = 0.25
        t_start = {t_mid}
        record_every = 5

        [profile]
        kind = "file"
        path = "{}"
        "#,
        dir.join("full/checkpoint-00000025.dspl").display()
    );
    run_document(
        ExperimentKind::Simulate,
        &restart_toml,
        &RunOptions {
            out: Some(dir.join("restarted")),
            ..RunOptions::default()
        },
    )?;
    let (final_restart, t_restart, _) = read_checkpoint(&dir.join("restarted/final.dspl"))?;

    let diff = sobolev_norm(&final_full.sub(&final_restart)?, 1.0);
    println!("mid-state H1 norm {:.6}", sobolev_norm(&mid, 1.0));
    println!("final times: full {t_full}, restarted {t_restart}");
    println!("H1 distance between final states: {diff:.3e}");
    assert!(diff < 1e-13);
    Ok(())
}
