//! The correlation (two-point space-time) estimate, checked directly on a
//! defocusing run: the space-time norm of the half-derivative of the density
//! is controlled by the conserved quantities,
//!
//!     ||D^{1/2}(|u|^2)||_{L^2_{t,x}}^2  <=  C sup_t M(t)
//!                                       <=  C' sup_t |u|_{H^{1/2}-dot}^2 |u|_{L^2}^2,
//!
//! with the two-point action M(t) tracked along the way.
//!
//! ```text
//! cargo run --release --example morawetz_estimate [nls|hartree]
//! ```

use dspl::baselines;
use dspl::estimates::check_correlation_estimate;
use dspl::propagator::evolve;

fn main() -> Result<(), dspl::error::Error> {
    let kind = std::env::args().nth(1).unwrap_or_else(|| "nls".to_string());
    // a shorter variant of the pinned estimate run keeps this example snappy
    let text = baselines::estimates_toml(&kind).replace("horizon = 10.0", "horizon = 4.0");
    let cfg = baselines::pinned(&text)?;
    let eq = cfg.equation()?;
    let f0 = cfg.initial_state()?;
    let solver = cfg.solver(&eq)?;

    let traj = evolve(&f0, &eq, &solver, |_, _, _| Ok(()))?;
    let report = check_correlation_estimate(&traj, baselines::CORRELATION_CEILING)?;

    println!("[{kind}] over t in [0, {}]:", traj.final_time());
    println!(
        "  sup_t |M(t)| = {:.6} vs action bound {:.6} -> {}",
        report.sup_abs_action,
        report.action_bound,
        if report.action_bound_ok { "pass" } else { "FAIL" }
    );
    println!(
        "  lhs {:.6}, rhs {:.6}, ratio {:.4} vs ceiling {:.4} -> {}",
        report.report.lhs,
        report.report.rhs,
        report.report.ratio,
        report.report.ceiling,
        if report.report.pass { "pass" } else { "FAIL" }
    );
    assert!(report.report.pass && report.action_bound_ok);
    Ok(())
}
