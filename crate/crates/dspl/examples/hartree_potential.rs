//! The truncated singular convolution behind the Hartree nonlinearity:
//!
//! * `(|x|^{-gamma} * 1)` at the box center equals the closed-form integral
//!   of the truncated kernel over the centered disc (exactly, by the strict
//!   |x| < L/2 truncation);
//! * against a brute-force O(n^4) double sum on a small grid;
//! * the convolution inequality ratio on a Gaussian.
//!
//! ```text
//! cargo run --release --example hartree_potential
//! ```

use dspl::baselines;
use dspl::estimates::check_hls;
use dspl::field::{Field, RealField};
use dspl::grid::Grid;
use dspl::kernel::{convolve_truncated, power_kernel_box_integral, KernelSpec};
use dspl::profile;
use dspl::propagator::hartree_potential;
use num_complex::Complex64;

fn main() -> Result<(), dspl::error::Error> {
    let gamma = 1.5;

    // Constant density: the potential at the box center is the cell-averaged
    // kernel summed over the strictly truncated disc. (The convolution is a
    // linear, non-circular one, so only the center sample sees the full
    // disc; corner samples see a quarter of it.)
    let grid = Grid::new(64, 20.0)?;
    let ones = Field::from_fn(grid, |_, _| Complex64::new(1.0, 0.0));
    let potential = hartree_potential(&ones, gamma)?;
    let center = potential.at(grid.n() / 2, grid.n() / 2);
    let closed = power_kernel_box_integral(grid, gamma)?;
    println!("constant density, n = {}, L = {}:", grid.n(), grid.box_length());
    println!("  potential at center  {center:.12}");
    println!("  box integral         {closed:.12}");
    println!("  difference           {:.3e}", (center - closed).abs());
    assert!((center - closed).abs() < 1e-12 * closed);

    // Brute force on a small grid: quadratic in the number of cells.
    let small = Grid::new(16, 8.0)?;
    let density = RealField::from_values(
        small,
        (0..small.n() * small.n())
            .map(|k| 0.3 + ((7 * k + 3) % 11) as f64 / 11.0)
            .collect(),
    )?;
    let fast = convolve_truncated(&density, KernelSpec::Power { gamma })?;
    let slow = brute_force_power(&density, gamma);
    let err = fast
        .values()
        .iter()
        .zip(slow.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("brute-force check, n = {}: max abs deviation {err:.3e}", small.n());
    assert!(err < 1e-10);

    // The convolution inequality on a Gaussian profile.
    let grid = Grid::new(256, 160.0)?;
    let u = profile::gaussian(grid, 1.0, 1.5, [0.0, 0.0])?;
    let report = check_hls(&u, gamma, baselines::HLS_CEILING)?;
    println!(
        "convolution inequality: lhs {:.6}, rhs {:.6}, ratio {:.4} vs ceiling {:.4} -> {}",
        report.lhs,
        report.rhs,
        report.ratio,
        report.ceiling,
        if report.pass { "pass" } else { "FAIL" }
    );
    assert!(report.pass);
    Ok(())
}

/// Direct evaluation of the truncated convolution: for every target cell,
/// sum the kernel over all source cells at unwrapped offsets strictly inside
/// the half-box radius (the convolution is linear, not circular), with the
/// kernel averaged over a 16x16 subdivision of the singular cell.
fn brute_force_power(f: &RealField, gamma: f64) -> RealField {
    let grid = f.grid();
    let n = grid.n() as i64;
    let h = grid.spacing();
    let cutoff = grid.box_length() / 2.0;
    let kernel = |dx: f64, dy: f64| -> f64 {
        let r = dx.hypot(dy);
        if r == 0.0 {
            let sub = 16;
            let mut acc = 0.0;
            for a in 0..sub {
                for b in 0..sub {
                    let x = (a as f64 + 0.5) / sub as f64 * h - h / 2.0;
                    let y = (b as f64 + 0.5) / sub as f64 * h - h / 2.0;
                    acc += x.hypot(y).powf(-gamma);
                }
            }
            acc / (sub * sub) as f64
        } else if r < cutoff {
            r.powf(-gamma)
        } else {
            0.0
        }
    };
    let src = f.values();
    let mut out = vec![0.0; (n * n) as usize];
    for row in 0..n {
        for col in 0..n {
            let mut acc = 0.0;
            for row2 in 0..n {
                for col2 in 0..n {
                    let (dx, dy) = ((col - col2) as f64 * h, (row - row2) as f64 * h);
                    acc += kernel(dx, dy) * src[(row2 * n + col2) as usize];
                }
            }
            out[(row * n + col) as usize] = acc * h * h;
        }
    }
    RealField::from_values(grid, out).expect("same grid")
}
