//! Diagnostics against independent brute-force oracles: the truncated
//! kernel convolutions and the two-point Morawetz action versus literal
//! O(n^4) double sums, the correlation density versus a direct DFT, and the
//! streaming space-time accumulator versus a hand trapezoid.

mod common;

use common::*;
use dspl::diagnostics::{
    correlation_density, densities, local_mass_residual, mass, momentum, morawetz_action,
    potential_energy, SpaceTimeAccumulator,
};
use dspl::field::RealField;
use dspl::grid::Grid;
use dspl::kernel::{convolve_direction, convolve_truncated, KernelSpec};
use dspl::profile::gaussian;
use dspl::propagator::{linear_propagate, Equation};

const SMALL_GRIDS: [usize; 4] = [2, 4, 8, 16];

#[test]
fn power_convolution_matches_brute_force_on_small_grids() {
    for (k, &n) in SMALL_GRIDS.iter().enumerate() {
        for (g, &gamma) in [1.0, 1.5].iter().enumerate() {
            let grid = Grid::new(n, 8.0).unwrap();
            let f = random_density(grid, 101 + (10 * k + g) as u64, (n as i64 / 2).min(3));
            let fast = convolve_truncated(&f, KernelSpec::Power { gamma }).unwrap();
            let brute = brute_power_convolution(&f, gamma);
            let scale = max_norm(&brute).max(1e-12);
            assert!(
                max_abs_diff(&fast, &brute) <= 1e-8 * scale,
                "power kernel n={n} gamma={gamma}: dev {} vs scale {scale}",
                max_abs_diff(&fast, &brute)
            );
        }
    }
}

#[test]
fn direction_convolution_matches_brute_force_on_small_grids() {
    for (k, &n) in SMALL_GRIDS.iter().enumerate() {
        let grid = Grid::new(n, 8.0).unwrap();
        let f = random_density(grid, 211 + k as u64, (n as i64 / 2).min(3));
        let (fx, fy) = convolve_direction(&f).unwrap();
        let (bx, by) = brute_direction_convolution(&f);
        // On the 2x2 grid every offset sits at or beyond the cutoff, so the
        // expected result is exactly zero; floor the scale at O(1) to admit
        // FFT round-off while staying far below any convention mismatch.
        let scale = max_norm(&bx).max(max_norm(&by)).max(1.0);
        assert!(
            max_abs_diff(&fx, &bx) <= 1e-8 * scale,
            "direction kernel x-component n={n}: dev {}",
            max_abs_diff(&fx, &bx)
        );
        assert!(
            max_abs_diff(&fy, &by) <= 1e-8 * scale,
            "direction kernel y-component n={n}: dev {}",
            max_abs_diff(&fy, &by)
        );
    }
}

#[test]
fn morawetz_action_matches_brute_force_on_small_grids() {
    for (k, &n) in SMALL_GRIDS.iter().enumerate() {
        let grid = Grid::new(n, 8.0).unwrap();
        let f = random_smooth_field(grid, 307 + k as u64, (n as i64 / 2).min(3), false);
        let fast = morawetz_action(&f).unwrap();
        let (rho, px, py) = densities(&f);
        let brute = brute_morawetz(&rho, &px, &py);
        assert!(
            (fast - brute).abs() <= 1e-8 * brute.abs().max(1.0),
            "morawetz n={n}: fast {fast} vs brute {brute}"
        );
    }
}

#[test]
fn hartree_potential_energy_matches_brute_force_pair_sum() {
    let grid = Grid::new(8, 8.0).unwrap();
    let f = random_smooth_field(grid, 401, 3, false);
    let gamma = 1.5;
    let fast = potential_energy(&f, &Equation::Hartree { gamma }).unwrap();
    let density =
        RealField::from_values(grid, f.values().iter().map(|z| z.norm_sqr()).collect()).unwrap();
    let conv = brute_power_convolution(&density, gamma);
    let pair: f64 = conv
        .values()
        .iter()
        .zip(density.values())
        .map(|(v, d)| v * d)
        .sum();
    let brute = 0.25 * pair * grid.cell_area();
    assert!(
        rel_err(fast, brute) <= 1e-10,
        "pair energy: fast {fast} vs brute {brute}"
    );
}

#[test]
fn correlation_density_matches_direct_dft() {
    for (k, &n) in [4usize, 8, 16].iter().enumerate() {
        let grid = Grid::new(n, 10.0).unwrap();
        let f = random_smooth_field(grid, 509 + k as u64, (n as i64 / 2).min(3), false);
        let fast = correlation_density(&f);
        let brute = brute_correlation_density(&f);
        assert!(
            rel_err(fast, brute) <= 1e-8,
            "correlation density n={n}: fast {fast} vs brute {brute}"
        );
    }
}

#[test]
fn momentum_and_mass_agree_with_density_quadrature() {
    let grid = Grid::new(32, 12.0).unwrap();
    let f = random_smooth_field(grid, 613, 3, false);
    let (rho, px, py) = densities(&f);
    let h2 = grid.cell_area();
    let mass_from_rho: f64 = 2.0 * h2 * rho.values().iter().sum::<f64>();
    assert!(rel_err(mass(&f), mass_from_rho) <= 1e-12);
    let [mx, my] = momentum(&f);
    let qx: f64 = h2 * px.values().iter().sum::<f64>();
    let qy: f64 = h2 * py.values().iter().sum::<f64>();
    assert!(
        (mx - qx).abs() <= 1e-10 * (1.0 + mx.abs()),
        "x momentum: spectral {mx} vs quadrature {qx}"
    );
    assert!(
        (my - qy).abs() <= 1e-10 * (1.0 + my.abs()),
        "y momentum: spectral {my} vs quadrature {qy}"
    );
}

#[test]
fn space_time_accumulator_matches_hand_trapezoid() {
    let grid = Grid::new(32, 10.0).unwrap();
    let base = gaussian(grid, 1.0, 1.0, [0.4, 0.0]).unwrap();
    let times = [0.0, 0.1, 0.25, 0.4];
    let scales = [1.0, 0.8, 1.3, 0.5];

    let mut acc = SpaceTimeAccumulator::new(4.0, 8.0).unwrap();
    assert_eq!(acc.exponents(), (4.0, 8.0));
    let mut sup = SpaceTimeAccumulator::new(f64::INFINITY, 6.0).unwrap();
    let mut norms = Vec::new();
    for (&t, &c) in times.iter().zip(&scales) {
        let scaled = dspl::field::Field::from_values(
            grid,
            base.values().iter().map(|z| z * c).collect(),
        )
        .unwrap();
        norms.push(dspl::spectral::lebesgue_norm(&scaled, 8.0).unwrap());
        acc.update(&scaled, t).unwrap();
        sup.update(&scaled, t).unwrap();
    }
    assert_eq!(acc.samples(), times.len());

    let mut integral = 0.0;
    for i in 1..times.len() {
        integral +=
            0.5 * (norms[i - 1].powi(4) + norms[i].powi(4)) * (times[i] - times[i - 1]);
    }
    assert!(
        rel_err(acc.value(), integral.powf(0.25)) <= 1e-12,
        "trapezoid: streaming {} vs hand {}",
        acc.value(),
        integral.powf(0.25)
    );

    let base6 = dspl::spectral::lebesgue_norm(&base, 6.0).unwrap();
    assert!(rel_err(sup.value(), 1.3 * base6) <= 1e-12);

    // Out-of-order samples must be rejected.
    assert!(acc.update(&base, 0.2).is_err());
    // Sub-unit exponents must be rejected.
    assert!(SpaceTimeAccumulator::new(0.5, 4.0).is_err());
    assert!(SpaceTimeAccumulator::new(4.0, 0.5).is_err());
}

#[test]
fn local_mass_residual_is_second_order_in_snapshot_spacing() {
    let grid = Grid::new(64, 24.0).unwrap();
    let f0 = gaussian(grid, 1.0, 1.2, [0.6, -0.3]).unwrap();
    let t = 0.4;
    let residual_at = |dt: f64| -> f64 {
        let prev = linear_propagate(&f0, t - dt);
        let mid = linear_propagate(&f0, t);
        let next = linear_propagate(&f0, t + dt);
        let r = local_mass_residual((&prev, t - dt), (&mid, t), (&next, t + dt)).unwrap();
        max_norm(&r)
    };
    let coarse = residual_at(2e-3);
    let fine = residual_at(1e-3);
    assert!(coarse < 1e-4, "residual should be tiny, got {coarse}");
    let ratio = coarse / fine;
    assert!(
        (3.5..=4.5).contains(&ratio),
        "central-difference residual should shrink ~4x per dt halving, got {ratio}"
    );

    // Unequal spacing is rejected.
    let prev = linear_propagate(&f0, t - 1e-3);
    let mid = linear_propagate(&f0, t);
    let next = linear_propagate(&f0, t + 2e-3);
    assert!(local_mass_residual((&prev, t - 1e-3), (&mid, t), (&next, t + 2e-3)).is_err());
}
