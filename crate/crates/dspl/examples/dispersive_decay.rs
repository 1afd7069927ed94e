//! Free-flow decay exponents: |U(t) psi|_sup ~ t^{-1} and |U(t) psi|_L4 ~
//! t^{-1/2} in two dimensions. Each sample is computed exactly (one Fourier
//! multiplier, no time stepping); the fit runs over a window chosen so the
//! dispersed envelope stays clear of the box edge.
//!
//! ```text
//! cargo run --release --example dispersive_decay
//! ```

use dspl::baselines;
use dspl::estimates::check_dispersive_decay;
use dspl::grid::Grid;
use dspl::profile;

fn main() -> Result<(), dspl::error::Error> {
    let grid = Grid::new(256, 160.0)?;
    let psi = profile::gaussian(grid, 1.0, 1.0, [0.0, 0.0])?;
    let (a, b, k) = (2.0, 12.0, 24);
    let times: Vec<f64> = (0..k)
        .map(|i| a * (b / a).powf(i as f64 / (k - 1) as f64))
        .collect();

    let report = check_dispersive_decay(&psi, &times)?;
    println!("{:>8} {:>12} {:>12}", "t", "sup", "L4");
    for ((t, sup), l4) in report
        .times
        .iter()
        .zip(&report.sup_norms)
        .zip(&report.l4_norms)
    {
        println!("{t:>8.3} {sup:>12.6e} {l4:>12.6e}");
    }
    println!("fitted sup slope {:.4} (plane: -1)", report.sup_slope);
    println!("fitted L4  slope {:.4} (plane: -1/2)", report.l4_slope);
    for w in &report.warnings {
        println!("warning: {w}");
    }

    let [lo, hi] = baselines::SUP_DECAY_SLOPE_BAND;
    assert!((lo..=hi).contains(&report.sup_slope));
    let [lo, hi] = baselines::L4_DECAY_SLOPE_BAND;
    assert!((lo..=hi).contains(&report.l4_slope));
    Ok(())
}
