//! Shared helpers for the integration suites: independent brute-force
//! oracles (direct double sums and DFTs, sharing no code with the library's
//! FFT-convolution paths) and seeded random field generators.
//!
//! Layout convention (mirrors the library): sample `(x_i, y_j)` lives at
//! linear index `j * n + i`, i.e. rows are y and columns are x. Kernel
//! convolutions are aperiodic (zero-padded linear convolutions truncated at
//! half the box), so the oracles use unwrapped index offsets.

// Each integration binary compiles this module separately and uses its own
// subset of the helpers.
#![allow(dead_code)]

use dspl::field::{Field, RealField};
use dspl::grid::Grid;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Power-kernel value `r^-gamma` at a physical offset, mirroring the
/// documented operator definition: strict truncation at the half box,
/// 16x16 midpoint cell average across the singular zero-offset cell.
fn power_kernel_value(dx: f64, dy: f64, gamma: f64, h: f64, cutoff: f64) -> f64 {
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
}

/// Physical offset for a pair of index offsets (column offset -> dx, row
/// offset -> dy). The truncated convolutions are true linear (non-circular)
/// ones on the zero-padded box, so offsets never wrap: two samples near
/// opposite edges are far apart, exactly as on the plane.
fn offset(grid: Grid, di: i64, dj: i64) -> (f64, f64) {
    let h = grid.spacing();
    (di as f64 * h, dj as f64 * h)
}

/// O(n^4) direct evaluation of the truncated power-kernel convolution.
pub fn brute_power_convolution(f: &RealField, gamma: f64) -> RealField {
    let grid = f.grid();
    let n = grid.n() as i64;
    let h = grid.spacing();
    let cutoff = grid.box_length() / 2.0;
    let src = f.values();
    let mut out = vec![0.0; grid.num_points()];
    for row in 0..n {
        for col in 0..n {
            let mut acc = 0.0;
            for row2 in 0..n {
                for col2 in 0..n {
                    let (dx, dy) = offset(grid, col - col2, row - row2);
                    acc += power_kernel_value(dx, dy, gamma, h, cutoff)
                        * src[(row2 * n + col2) as usize];
                }
            }
            out[(row * n + col) as usize] = acc * grid.cell_area();
        }
    }
    RealField::from_values(grid, out).expect("same grid")
}

/// O(n^4) direct evaluation of the truncated direction-kernel convolution
/// (vector kernel x/|x|; zero across the singular cell by oddness).
pub fn brute_direction_convolution(f: &RealField) -> (RealField, RealField) {
    let grid = f.grid();
    let n = grid.n() as i64;
    let cutoff = grid.box_length() / 2.0;
    let src = f.values();
    let mut out_x = vec![0.0; grid.num_points()];
    let mut out_y = vec![0.0; grid.num_points()];
    for row in 0..n {
        for col in 0..n {
            let (mut ax, mut ay) = (0.0, 0.0);
            for row2 in 0..n {
                for col2 in 0..n {
                    let (dx, dy) = offset(grid, col - col2, row - row2);
                    let r = dx.hypot(dy);
                    if r > 0.0 && r < cutoff {
                        let v = src[(row2 * n + col2) as usize];
                        ax += dx / r * v;
                        ay += dy / r * v;
                    }
                }
            }
            out_x[(row * n + col) as usize] = ax * grid.cell_area();
            out_y[(row * n + col) as usize] = ay * grid.cell_area();
        }
    }
    (
        RealField::from_values(grid, out_x).expect("same grid"),
        RealField::from_values(grid, out_y).expect("same grid"),
    )
}

/// O(n^4) two-point Morawetz action
/// `M = 2 sum_{x,y} e(x-y) . (p(x) rho(y) - p(y) rho(x)) h^4`
/// evaluated as the literal double sum over point pairs.
pub fn brute_morawetz(rho: &RealField, px: &RealField, py: &RealField) -> f64 {
    let grid = rho.grid();
    let n = grid.n() as i64;
    let cutoff = grid.box_length() / 2.0;
    let mut acc = 0.0;
    for row in 0..n {
        for col in 0..n {
            for row2 in 0..n {
                for col2 in 0..n {
                    let (dx, dy) = offset(grid, col - col2, row - row2);
                    let r = dx.hypot(dy);
                    if r > 0.0 && r < cutoff {
                        let (ex, ey) = (dx / r, dy / r);
                        let a = (row * n + col) as usize;
                        let b = (row2 * n + col2) as usize;
                        acc += (ex * px.values()[a] + ey * py.values()[a]) * rho.values()[b]
                            - (ex * px.values()[b] + ey * py.values()[b]) * rho.values()[a];
                    }
                }
            }
        }
    }
    2.0 * acc * grid.cell_area() * grid.cell_area()
}

/// O(n^4) direct-DFT evaluation of `sum_k |xi_k| |FT(|u|^2)_k|^2` with the
/// library's transform normalization `hat g = (L/n^2) FFT(g)`, under which
/// the plain mode sum is the quadrature of the squared half-derivative norm.
pub fn brute_correlation_density(f: &Field) -> f64 {
    let grid = f.grid();
    let n = grid.n() as i64;
    let l = grid.box_length();
    let g: Vec<f64> = f.values().iter().map(|z| z.norm_sqr()).collect();
    let dk = 2.0 * std::f64::consts::PI / l;
    let mut acc = 0.0;
    for ky in 0..n {
        for kx in 0..n {
            let my = if ky > n / 2 { ky - n } else { ky } as f64;
            let mx = if kx > n / 2 { kx - n } else { kx } as f64;
            let mut coeff = Complex64::new(0.0, 0.0);
            for row in 0..n {
                for col in 0..n {
                    let phase =
                        -2.0 * std::f64::consts::PI / n as f64 * (ky * row + kx * col) as f64;
                    coeff += g[(row * n + col) as usize] * Complex64::new(0.0, phase).exp();
                }
            }
            let hat = coeff * l / (n * n) as f64;
            acc += (mx * dk).hypot(my * dk) * hat.norm_sqr();
        }
    }
    acc
}

/// Smooth random field: low Fourier modes with Gaussian-decaying seeded
/// coefficients, synthesized directly in physical space (independent of the
/// library FFT). The zero mode can be suppressed for gradient-sensitive
/// inequalities.
pub fn random_smooth_field(grid: Grid, seed: u64, max_mode: i64, zero_dc: bool) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut modes = Vec::new();
    for mi in -max_mode..=max_mode {
        for mj in -max_mode..=max_mode {
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            if zero_dc && mi == 0 && mj == 0 {
                continue;
            }
            let decay = (-0.35 * ((mi * mi + mj * mj) as f64)).exp();
            modes.push((mi as f64, mj as f64, Complex64::new(re, im) * decay));
        }
    }
    let k0 = 2.0 * std::f64::consts::PI / grid.box_length();
    Field::from_fn(grid, |x, y| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(mi, mj, c) in &modes {
            acc += c * Complex64::new(0.0, k0 * (mi * x + mj * y)).exp();
        }
        acc
    })
}

/// Real positive test density derived from the seeded smooth field.
pub fn random_density(grid: Grid, seed: u64, max_mode: i64) -> RealField {
    let f = random_smooth_field(grid, seed, max_mode, false);
    RealField::from_values(grid, f.values().iter().map(|z| z.norm_sqr()).collect())
        .expect("same grid")
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

pub fn max_abs_diff(a: &RealField, b: &RealField) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_norm(a: &RealField) -> f64 {
    a.values().iter().map(|x| x.abs()).fold(0.0, f64::max)
}
