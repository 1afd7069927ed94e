use crate::error::{Error, Result};
use crate::fft::fft2;
use crate::field::Field;
use crate::grid::Grid;
use num_complex::Complex64;

/// Discrete Fourier coefficients of a [`Field`], row-major over frequency
/// bins: `values[ky*n + kx]` holds the coefficient for the lattice frequency
/// `(xi(kx), xi(ky))`.
///
/// Normalization ties the two Parseval sums together exactly:
/// `sum_k |u_hat_k|^2 = h^2 * sum_i |u_i|^2`, so spectral and physical L^2
/// norms agree grid-independently.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    values: Vec<Complex64>,
}

/// Forward transform with the Parseval-preserving normalization
/// `u_hat = (L/n^2) * DFT(u)`.
pub fn transform(f: &Field) -> Spectrum {
    let grid = f.grid();
    let n = grid.n();
    let mut values = f.values().to_vec();
    fft2(n).forward(&mut values);
    let scale = grid.box_length() / (n * n) as f64;
    for v in &mut values {
        *v *= scale;
    }
    Spectrum { grid, values }
}

/// Inverse of [`transform`]: `u = IDFT(u_hat) / L`.
pub fn inverse_transform(s: &Spectrum) -> Field {
    let n = s.grid.n();
    let mut values = s.values.clone();
    fft2(n).inverse(&mut values);
    let scale = 1.0 / s.grid.box_length();
    for v in &mut values {
        *v *= scale;
    }
    Field::from_values(s.grid, values).expect("inverse transform produced invalid field")
}

impl Spectrum {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn from_values(grid: Grid, values: Vec<Complex64>) -> Result<Spectrum> {
        if values.len() != grid.num_points() {
            return Err(Error::InvalidArgument(
                "spectrum length does not match grid".into(),
            ));
        }
        Ok(Spectrum { grid, values })
    }

    /// Applies a pointwise frequency multiplier `m(xi_x, xi_y)`.
    pub fn apply_multiplier(&mut self, mut m: impl FnMut(f64, f64) -> Complex64) {
        let n = self.grid.n();
        for ky in 0..n {
            let fy = self.grid.frequency(ky);
            for kx in 0..n {
                self.values[ky * n + kx] *= m(self.grid.frequency(kx), fy);
            }
        }
    }

    /// Parseval sum `sum_k w(|xi|^2) |u_hat_k|^2` for a radial weight.
    pub fn weighted_sum(&self, mut w: impl FnMut(f64) -> f64) -> f64 {
        let n = self.grid.n();
        let mut acc = 0.0;
        for ky in 0..n {
            let fy = self.grid.frequency(ky);
            for kx in 0..n {
                let fx = self.grid.frequency(kx);
                acc += w(fx * fx + fy * fy) * self.values[ky * n + kx].norm_sqr();
            }
        }
        acc
    }

    /// Inhomogeneous Sobolev norm `(sum (1+|xi|^2)^s |u_hat|^2)^(1/2)`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.weighted_sum(|q| (1.0 + q).powf(s)).sqrt()
    }

    /// Homogeneous Sobolev norm; the zero mode is dropped for s != 0.
    pub fn dot_sobolev_norm(&self, s: f64) -> f64 {
        if s == 0.0 {
            return self.weighted_sum(|_| 1.0).sqrt();
        }
        self.weighted_sum(|q| if q == 0.0 { 0.0 } else { q.powf(s) })
            .sqrt()
    }
}

/// Fractional derivative `D^s`: multiplier `|xi|^s`, with the mean (xi = 0)
/// dropped for every s != 0. Orders below -1 are rejected; the kernels in
/// use never need them and the multiplier becomes too singular to trust.
pub fn fractional_derivative(f: &Field, s: f64) -> Result<Field> {
    if !s.is_finite() || s < -1.0 {
        return Err(Error::InvalidArgument(format!(
            "fractional derivative order must be finite and >= -1, got {s}"
        )));
    }
    let mut spec = transform(f);
    if s != 0.0 {
        spec.apply_multiplier(|fx, fy| {
            let q = fx * fx + fy * fy;
            if q == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(q.powf(0.5 * s), 0.0)
            }
        });
    }
    Ok(inverse_transform(&spec))
}

/// `H^s` norm of a physical-space field.
pub fn sobolev_norm(f: &Field, s: f64) -> f64 {
    transform(f).sobolev_norm(s)
}

/// Homogeneous `H^s` norm of a physical-space field.
pub fn dot_sobolev_norm(f: &Field, s: f64) -> f64 {
    transform(f).dot_sobolev_norm(s)
}

/// Lebesgue norm `(h^2 sum |u|^r)^(1/r)`; `r = f64::INFINITY` gives the max.
/// Exponents below 1 are rejected (not norms).
pub fn lebesgue_norm(f: &Field, r: f64) -> Result<f64> {
    if r.is_nan() || r < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "Lebesgue exponent must be >= 1 (or infinite), got {r}"
        )));
    }
    if r.is_infinite() {
        return Ok(f
            .values()
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm_sqr()))
            .sqrt());
    }
    let half_r = 0.5 * r;
    let sum: f64 = f.values().iter().map(|z| z.norm_sqr().powf(half_r)).sum();
    Ok((sum * f.grid().cell_area()).powf(1.0 / r))
}

/// Spectral gradient `(d/dx u, d/dy u)` via the `i*xi` multipliers.
pub fn gradient(f: &Field) -> (Field, Field) {
    let spec = transform(f);
    let mut sx = spec.clone();
    sx.apply_multiplier(|fx, _| Complex64::new(0.0, fx));
    let mut sy = spec;
    sy.apply_multiplier(|_, fy| Complex64::new(0.0, fy));
    (inverse_transform(&sx), inverse_transform(&sy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn wavy(grid: Grid) -> Field {
        Field::from_fn(grid, |x, y| {
            Complex64::new((1.3 * x).sin() + 0.4 * (0.7 * y).cos(), (x * y * 0.2).sin())
        })
    }

    #[test]
    fn parseval_holds() {
        let g = Grid::new(32, 5.0).unwrap();
        let f = wavy(g);
        let phys: f64 = f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() * g.cell_area();
        let spec: f64 = transform(&f).values().iter().map(|z| z.norm_sqr()).sum();
        assert!((phys - spec).abs() < 1e-12 * phys.max(1.0));
    }

    #[test]
    fn round_trip_is_identity() {
        let g = Grid::new(16, 3.0).unwrap();
        let f = wavy(g);
        let back = inverse_transform(&transform(&f));
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn plane_wave_homogeneous_norm() {
        // A*exp(i k.x) on a box of side L has dot-H^s norm |k|^s * A * L.
        let l = 7.0;
        let g = Grid::new(32, l).unwrap();
        let a = 0.8;
        let (mx, my) = (3.0, -2.0);
        let (kx, ky) = (2.0 * PI * mx / l, 2.0 * PI * my / l);
        let f = Field::from_fn(g, |x, y| {
            Complex64::from_polar(a, kx * x + ky * y)
        });
        let kmag = (kx * kx + ky * ky).sqrt();
        for s in [-1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
            let want = if s == 0.0 { a * l } else { kmag.powf(s) * a * l };
            let got = dot_sobolev_norm(&f, s);
            assert!(
                (got - want).abs() < 1e-9 * want,
                "s={s}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn fractional_derivative_matches_direct_spectral_sum() {
        // Independent oracle: evaluate D^s f by the raw double DFT sum.
        let n = 8;
        let l = 3.0;
        let g = Grid::new(n, l).unwrap();
        let f = wavy(g);
        let s = 0.5;
        let got = fractional_derivative(&f, s).unwrap();

        let mut coeff = vec![Complex64::new(0.0, 0.0); n * n];
        for ky in 0..n {
            for kx in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    for i in 0..n {
                        let phase = -2.0 * PI * ((kx * i) as f64 + (ky * j) as f64) / n as f64;
                        acc += f.values()[j * n + i] * Complex64::from_polar(1.0, phase);
                    }
                }
                coeff[ky * n + kx] = acc / (n * n) as f64; // DFT coefficients
            }
        }
        for j in 0..n {
            for i in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for ky in 0..n {
                    for kx in 0..n {
                        let (fx, fy) = (g.frequency(kx), g.frequency(ky));
                        let q = fx * fx + fy * fy;
                        if q == 0.0 {
                            continue;
                        }
                        let phase = 2.0 * PI * ((kx * i) as f64 + (ky * j) as f64) / n as f64;
                        acc += coeff[ky * n + kx]
                            * q.powf(0.5 * s)
                            * Complex64::from_polar(1.0, phase);
                    }
                }
                assert!((got.values()[j * n + i] - acc).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn derivative_orders_compose() {
        let g = Grid::new(16, 4.0).unwrap();
        let f = wavy(g);
        let a = fractional_derivative(&fractional_derivative(&f, 0.7).unwrap(), 0.3).unwrap();
        let b = fractional_derivative(&f, 1.0).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn rejects_orders_below_minus_one() {
        let g = Grid::new(8, 1.0).unwrap();
        let f = wavy(g);
        assert!(fractional_derivative(&f, -1.5).is_err());
        assert!(fractional_derivative(&f, f64::NAN).is_err());
        assert!(fractional_derivative(&f, -1.0).is_ok());
    }

    #[test]
    fn sobolev_norm_monotone_in_order() {
        let g = Grid::new(16, 4.0).unwrap();
        let f = wavy(g);
        let mut prev = 0.0;
        for s in [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0] {
            let cur = sobolev_norm(&f, s);
            assert!(cur >= prev, "H^{s} norm decreased");
            prev = cur;
        }
    }

    #[test]
    fn gaussian_norms_match_closed_forms() {
        // exp(-|x|^2/2): ||u||_L2^2 = pi, ||grad u||_L2^2 = pi,
        // ||u||_H1^2 = 2*pi, ||u||_L4^4 = pi/2.
        let g = Grid::new(128, 30.0).unwrap();
        let f = Field::from_fn(g, |x, y| Complex64::new((-0.5 * (x * x + y * y)).exp(), 0.0));
        let l2 = lebesgue_norm(&f, 2.0).unwrap();
        assert!((l2 * l2 - PI).abs() < 1e-10);
        let h1 = sobolev_norm(&f, 1.0);
        assert!((h1 * h1 - 2.0 * PI).abs() < 1e-9);
        let (gx, gy) = gradient(&f);
        let grad_sq: f64 = (gx.values().iter().map(|z| z.norm_sqr()).sum::<f64>()
            + gy.values().iter().map(|z| z.norm_sqr()).sum::<f64>())
            * g.cell_area();
        assert!((grad_sq - PI).abs() < 1e-9);
        let l4 = lebesgue_norm(&f, 4.0).unwrap();
        assert!((l4.powi(4) - 0.5 * PI).abs() < 1e-10);
    }

    #[test]
    fn lebesgue_rejects_sub_unit_exponents_and_handles_sup() {
        let g = Grid::new(8, 2.0).unwrap();
        let f = Field::from_fn(g, |x, _| Complex64::new(x, 0.0));
        assert!(lebesgue_norm(&f, 0.5).is_err());
        assert!(lebesgue_norm(&f, f64::NAN).is_err());
        let sup = lebesgue_norm(&f, f64::INFINITY).unwrap();
        assert!((sup - 1.0).abs() < 1e-14); // max |x| on [-1, 1) grid is 1.0
    }

    #[test]
    fn constant_field_lebesgue_norms() {
        // Constant A on a box of area L^2: ||u||_r = A * L^(2/r).
        let l = 3.0;
        let g = Grid::new(16, l).unwrap();
        let a = 1.7;
        let f = Field::from_fn(g, |_, _| Complex64::new(a, 0.0));
        for r in [1.0, 2.0, 3.5, 8.0] {
            let want = a * l.powf(2.0 / r);
            let got = lebesgue_norm(&f, r).unwrap();
            assert!((got - want).abs() < 1e-12 * want);
        }
        assert!((lebesgue_norm(&f, f64::INFINITY).unwrap() - a).abs() < 1e-14);
    }
}
