//! Free-flow sanity check: evolve a unit Gaussian by time stepping and
//! compare against the plane closed form
//!
//!     exp(-|x|^2/2)  ->  (1+2it)^{-1} exp(-|x|^2 / (2(1+2it))),
//!
//! which is valid on the torus while the dispersed tail (width
//! sqrt(1+4t^2)) stays clear of the box edge.
//!
//! ```text
//! cargo run --release --example linear_gaussian
//! ```

use dspl::baselines;
use dspl::config::ExperimentKind;
use dspl::field::Field;
use dspl::propagator::{evolve, Equation, SolverConfig};
use dspl::runner::{run_document, RunOptions};
use num_complex::Complex64;
use std::path::PathBuf;

fn main() -> Result<(), dspl::error::Error> {
    let cfg = baselines::pinned(baselines::LINEAR_GAUSSIAN_TOML)?;
    let grid = cfg.grid()?;
    let f0 = cfg.initial_state()?;
    let solver = cfg.solver(&Equation::Linear)?;

    let traj = evolve(&f0, &Equation::Linear, &solver, |_, _, _| Ok(()))?;
    let t = traj.final_time();
    let denom = Complex64::new(1.0, 2.0 * t);
    let exact = Field::from_fn(grid, |x, y| {
        (Complex64::new(-0.5 * (x * x + y * y), 0.0) / denom).exp() / denom
    });

    let max_err = traj
        .final_field
        .values()
        .iter()
        .zip(exact.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    let first = &traj.records[0];
    let last = traj.records.last().unwrap();

    println!("linear Gaussian on {}^2, box length {}", grid.n(), grid.box_length());
    println!("stepped to t = {t} with dt = {}", solver.dt);
    println!("max pointwise error vs closed form: {max_err:.3e}");
    println!(
        "mass drift {:.3e}, energy drift {:.3e}",
        (last.mass - first.mass).abs() / first.mass,
        (last.energy - first.energy).abs() / first.energy,
    );
    assert!(max_err < baselines::LINEAR_POINTWISE_TOL);

    // The same run through the experiment driver, leaving artifacts on disk.
    let outcome = run_document(
        ExperimentKind::Simulate,
        baselines::LINEAR_GAUSSIAN_TOML,
        &RunOptions {
            out: Some(PathBuf::from("target/examples/linear-gaussian")),
            ..RunOptions::default()
        },
    )?;
    println!("artifacts in {}", outcome.out_dir.display());
    Ok(())
}
