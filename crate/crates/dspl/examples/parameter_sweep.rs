//! Parameter sweeps: the cross product of the `[sweep]` axes runs in a
//! stable order (p, gamma, horizon, n, dt — earlier axes vary slowest), one
//! subdirectory per run, aggregated into `sweep.csv`. A failing combination
//! is recorded in its row without stopping the sweep.
//!
//! ```text
//! cargo run --release --example parameter_sweep
//! ```

use dspl::baselines;
use dspl::runner::{run_sweep, RunOptions};
use std::path::PathBuf;

fn main() -> Result<(), dspl::error::Error> {
    let dir = PathBuf::from("target/examples/sweep");
    let template = format!(
        "{}\n[sweep]\np = [2.2, 2.5, 2.8]\ndt = [1e-2, 5e-3]\n",
        baselines::SMOKE_TOML
    );
    let outcome = run_sweep(
        &template,
        &RunOptions {
            out: Some(dir.clone()),
            ..RunOptions::default()
        },
    )?;
    for line in &outcome.lines {
        println!("{line}");
    }
    println!();
    print!("{}", std::fs::read_to_string(dir.join("sweep.csv"))?);
    assert!(outcome.passed);
    Ok(())
}
