//! Interpolated space-time bounds: for admissible exponent pairs (q, r) with
//! 3/q + 2/r = 1, the mixed norm ||u||_{L^q_t L^r_x} is controlled by
//! mass^{theta1} * correlation^{theta2} with
//!
//!     theta1 = (r-2)/(6r),    theta2 = 2(r+1)/(3r).
//!
//! The accumulator streams the L^r norm at every record and closes the
//! time integral by trapezoid (running sup for q = inf).
//!
//! ```text
//! cargo run --release --example interpolated_bounds
//! ```

use dspl::baselines;
use dspl::diagnostics::SpaceTimeAccumulator;
use dspl::estimates::{check_interpolated_bound, interpolation_exponents};
use dspl::propagator::evolve;

fn main() -> Result<(), dspl::error::Error> {
    let text = baselines::estimates_toml("nls").replace("horizon = 10.0", "horizon = 4.0");
    let cfg = baselines::pinned(&text)?;
    let eq = cfg.equation()?;
    let f0 = cfg.initial_state()?;
    let solver = cfg.solver(&eq)?;

    let pairs = [[4.0, 8.0], [6.0, 4.0], [9.0, 3.0]];
    let mut accs = pairs
        .iter()
        .map(|&[q, r]| SpaceTimeAccumulator::new(q, r))
        .collect::<Result<Vec<_>, _>>()?;

    evolve(&f0, &eq, &solver, |f, t, _| {
        for acc in &mut accs {
            acc.update(f, t)?;
        }
        Ok(())
    })?;

    for acc in &accs {
        let (q, r) = acc.exponents();
        let (theta1, theta2) = interpolation_exponents(r);
        let report = check_interpolated_bound(&acc.clone(), &f0, &eq, baselines::INTERPOLATED_CEILING)?;
        println!(
            "(q, r) = ({q}, {r}): exponents ({theta1:.4}, {theta2:.4}), \
             |u|_LqLr = {:.6}, bound {:.6}, ratio {:.4} -> {}",
            report.lhs,
            report.rhs,
            report.ratio,
            if report.pass { "pass" } else { "FAIL" }
        );
        assert!(report.pass);
    }
    Ok(())
}
