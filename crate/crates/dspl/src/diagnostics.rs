use crate::error::{Error, Result};
use crate::field::{Field, RealField};
use crate::kernel::{convolver, KernelSpec};
use crate::propagator::Equation;
use crate::spectral::{inverse_transform, lebesgue_norm, transform, Spectrum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Scalar diagnostics monitored along a run. One NDJSON line per record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub time: f64,
    /// Squared L^2 norm (the conserved mass).
    pub mass: f64,
    pub kinetic: f64,
    pub potential: f64,
    pub energy: f64,
    pub momentum_x: f64,
    pub momentum_y: f64,
    pub h_half: f64,
    pub dot_h_half: f64,
    pub h_one: f64,
    pub l4: f64,
    pub l_infty: f64,
    pub morawetz_action: f64,
    pub correlation_density: f64,
    /// Fraction of mass outside |x| < L/4.
    pub boundary_mass_fraction: f64,
}

/// Mass `||u||_L2^2` by direct quadrature (the quantity the phase sub-flows
/// preserve pointwise).
pub fn mass(f: &Field) -> f64 {
    f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() * f.grid().cell_area()
}

fn kinetic_from_spectrum(spec: &Spectrum) -> f64 {
    0.5 * spec.weighted_sum(|q| q)
}

/// Total momentum `Im integral conj(u) grad u`, evaluated spectrally as
/// `sum_k xi |u_hat_k|^2`.
pub fn momentum(f: &Field) -> [f64; 2] {
    momentum_from_spectrum(&transform(f))
}

fn momentum_from_spectrum(spec: &Spectrum) -> [f64; 2] {
    let grid = spec.grid();
    let n = grid.n();
    let (mut px, mut py) = (0.0, 0.0);
    for ky in 0..n {
        let fy = grid.frequency(ky);
        for kx in 0..n {
            let w = spec.values()[ky * n + kx].norm_sqr();
            px += grid.frequency(kx) * w;
            py += fy * w;
        }
    }
    [px, py]
}

/// Potential part of the conserved energy:
/// `||u||_{p+1}^{p+1}/(p+1)` for NLS, `(1/4) integral (V*|u|^2)|u|^2` for
/// Hartree, zero for the linear flow.
pub fn potential_energy(f: &Field, eq: &Equation) -> Result<f64> {
    match *eq {
        Equation::Linear => Ok(0.0),
        Equation::Nls { p } => {
            let lp = lebesgue_norm(f, p + 1.0)?;
            Ok(lp.powf(p + 1.0) / (p + 1.0))
        }
        Equation::Hartree { gamma } => {
            let conv = convolver(f.grid(), KernelSpec::Power { gamma })?;
            let density = f.modulus_squared();
            let pot = conv.apply(&density)?;
            let pair: f64 = pot
                .values()
                .iter()
                .zip(density.values())
                .map(|(v, d)| v * d)
                .sum();
            Ok(0.25 * pair * f.grid().cell_area())
        }
    }
}

/// Conserved energy `1/2 ||grad u||^2 + potential`.
pub fn energy(f: &Field, eq: &Equation) -> Result<f64> {
    Ok(kinetic_from_spectrum(&transform(f)) + potential_energy(f, eq)?)
}

/// Mass density `rho = |u|^2 / 2` and momentum density
/// `p_j = Im(conj(u) d_j u)` with spectral derivatives.
pub fn densities(f: &Field) -> (RealField, RealField, RealField) {
    let grid = f.grid();
    let spec = transform(f);
    let mut sx = spec.clone();
    sx.apply_multiplier(|fx, _| Complex64::new(0.0, fx));
    let mut sy = spec;
    sy.apply_multiplier(|_, fy| Complex64::new(0.0, fy));
    let dx = inverse_transform(&sx);
    let dy = inverse_transform(&sy);

    let rho = RealField::from_values(
        grid,
        f.values().iter().map(|z| 0.5 * z.norm_sqr()).collect(),
    )
    .expect("density layout");
    let px = RealField::from_values(
        grid,
        f.values()
            .iter()
            .zip(dx.values())
            .map(|(u, d)| (u.conj() * d).im)
            .collect(),
    )
    .expect("density layout");
    let py = RealField::from_values(
        grid,
        f.values()
            .iter()
            .zip(dy.values())
            .map(|(u, d)| (u.conj() * d).im)
            .collect(),
    )
    .expect("density layout");
    (rho, px, py)
}

/// Two-point Morawetz action
/// `M = 2 integral e(x-y).(p(x) rho(y) - p(y) rho(x)) dx dy`, reduced by the
/// oddness of `e(x) = x/|x|` to the convolution form
/// `M = 4 integral p.(e * rho)`. The truncated direction kernel keeps the
/// pairing on the box consistent with the plane-based estimate.
pub fn morawetz_action(f: &Field) -> Result<f64> {
    let (rho, px, py) = densities(f);
    morawetz_action_from_densities(&rho, &px, &py)
}

/// Convolution form evaluated from precomputed densities.
pub fn morawetz_action_from_densities(
    rho: &RealField,
    px: &RealField,
    py: &RealField,
) -> Result<f64> {
    let grid = rho.grid();
    let conv = convolver(grid, KernelSpec::Direction)?;
    let (cx, cy) = conv.apply_vector(rho)?;
    let mut acc = 0.0;
    for i in 0..grid.num_points() {
        acc += px.values()[i] * cx.values()[i] + py.values()[i] * cy.values()[i];
    }
    Ok(4.0 * acc * grid.cell_area())
}

/// Correlation density `||D^(1/2)(|u|^2)||_L2^2`, evaluated as the Parseval
/// sum `sum_k |xi| |FT(|u|^2)_k|^2`.
pub fn correlation_density(f: &Field) -> f64 {
    let sq = Field::from_values(
        f.grid(),
        f.values()
            .iter()
            .map(|z| Complex64::new(z.norm_sqr(), 0.0))
            .collect(),
    )
    .expect("modulus-squared layout");
    transform(&sq).weighted_sum(|q| q.sqrt())
}

/// Fraction of mass outside the disk |x| < L/4 (zero for the zero field).
pub fn boundary_mass_fraction(f: &Field) -> f64 {
    let grid = f.grid();
    let n = grid.n();
    let r2 = (0.25 * grid.box_length()).powi(2);
    let mut outside = 0.0;
    let mut total = 0.0;
    for j in 0..n {
        let y = grid.coord(j);
        for i in 0..n {
            let x = grid.coord(i);
            let w = f.values()[j * n + i].norm_sqr();
            total += w;
            if x * x + y * y >= r2 {
                outside += w;
            }
        }
    }
    if total == 0.0 {
        0.0
    } else {
        outside / total
    }
}

/// Full diagnostics record at time `t`.
pub fn record(f: &Field, eq: &Equation, t: f64) -> Result<DiagnosticsRecord> {
    let grid = f.grid();
    let spec = transform(f);
    let kinetic = kinetic_from_spectrum(&spec);
    let [momentum_x, momentum_y] = momentum_from_spectrum(&spec);
    let h_half = spec.sobolev_norm(0.5);
    let dot_h_half = spec.dot_sobolev_norm(0.5);
    let h_one = spec.sobolev_norm(1.0);

    let mass_val = mass(f);
    let potential = potential_energy(f, eq)?;

    // Derivatives reuse the spectrum computed above.
    let mut sx = spec.clone();
    sx.apply_multiplier(|fx, _| Complex64::new(0.0, fx));
    let mut sy = spec;
    sy.apply_multiplier(|_, fy| Complex64::new(0.0, fy));
    let dx = inverse_transform(&sx);
    let dy = inverse_transform(&sy);
    let rho = RealField::from_values(
        grid,
        f.values().iter().map(|z| 0.5 * z.norm_sqr()).collect(),
    )?;
    let px = RealField::from_values(
        grid,
        f.values()
            .iter()
            .zip(dx.values())
            .map(|(u, d)| (u.conj() * d).im)
            .collect(),
    )?;
    let py = RealField::from_values(
        grid,
        f.values()
            .iter()
            .zip(dy.values())
            .map(|(u, d)| (u.conj() * d).im)
            .collect(),
    )?;

    Ok(DiagnosticsRecord {
        time: t,
        mass: mass_val,
        kinetic,
        potential,
        energy: kinetic + potential,
        momentum_x,
        momentum_y,
        h_half,
        dot_h_half,
        h_one,
        l4: lebesgue_norm(f, 4.0)?,
        l_infty: lebesgue_norm(f, f64::INFINITY)?,
        morawetz_action: morawetz_action_from_densities(&rho, &px, &py)?,
        correlation_density: correlation_density(f),
        boundary_mass_fraction: boundary_mass_fraction(f),
    })
}

/// Streaming trapezoidal accumulator for the mixed norm
/// `|| ||u||_{L^r_x} ||_{L^q_t}`; `q = inf` keeps a running sup.
#[derive(Debug, Clone)]
pub struct SpaceTimeAccumulator {
    q: f64,
    r: f64,
    last: Option<(f64, f64)>,
    integral: f64,
    sup: f64,
    samples: usize,
}

impl SpaceTimeAccumulator {
    pub fn new(q: f64, r: f64) -> Result<SpaceTimeAccumulator> {
        if q.is_nan() || q < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "time exponent must be >= 1 (or infinite), got {q}"
            )));
        }
        if r.is_nan() || r < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "space exponent must be >= 1 (or infinite), got {r}"
            )));
        }
        Ok(SpaceTimeAccumulator {
            q,
            r,
            last: None,
            integral: 0.0,
            sup: 0.0,
            samples: 0,
        })
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.q, self.r)
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Feeds the state at time `t`; samples must arrive in strictly
    /// increasing time order.
    pub fn update(&mut self, f: &Field, t: f64) -> Result<()> {
        let norm = lebesgue_norm(f, self.r)?;
        if let Some((t0, g0)) = self.last {
            if t <= t0 {
                return Err(Error::InvalidArgument(format!(
                    "out-of-order time sample {t} after {t0}"
                )));
            }
            if self.q.is_finite() {
                let g1 = norm.powf(self.q);
                self.integral += 0.5 * (g0 + g1) * (t - t0);
                self.last = Some((t, g1));
            } else {
                self.last = Some((t, 0.0));
            }
        } else {
            let g = if self.q.is_finite() {
                norm.powf(self.q)
            } else {
                0.0
            };
            self.last = Some((t, g));
        }
        self.sup = self.sup.max(norm);
        self.samples += 1;
        Ok(())
    }

    /// The accumulated mixed norm over the samples seen so far.
    pub fn value(&self) -> f64 {
        if self.q.is_finite() {
            self.integral.powf(1.0 / self.q)
        } else {
            self.sup
        }
    }
}

/// Discrete local mass-conservation residual
/// `(rho(t+dt) - rho(t-dt)) / (2 dt) + div p(t)` from three equally spaced
/// snapshots; second-order in the snapshot spacing.
pub fn local_mass_residual(
    prev: (&Field, f64),
    mid: (&Field, f64),
    next: (&Field, f64),
) -> Result<RealField> {
    let grid = mid.0.grid();
    if prev.0.grid() != grid || next.0.grid() != grid {
        return Err(Error::InvalidArgument(
            "snapshots live on different grids".into(),
        ));
    }
    let d1 = mid.1 - prev.1;
    let d2 = next.1 - mid.1;
    if d1 <= 0.0 || d2 <= 0.0 || (d1 - d2).abs() > 1e-9 * d1.abs().max(d2.abs()) {
        return Err(Error::InvalidArgument(format!(
            "snapshots must be equally spaced in increasing time, got spacings {d1} and {d2}"
        )));
    }
    let inv_2dt = 1.0 / (d1 + d2);

    let (_, px, py) = densities(mid.0);
    let mut sx = transform(&Field::from_values(
        grid,
        px.values().iter().map(|v| Complex64::new(*v, 0.0)).collect(),
    )?);
    sx.apply_multiplier(|fx, _| Complex64::new(0.0, fx));
    let mut sy = transform(&Field::from_values(
        grid,
        py.values().iter().map(|v| Complex64::new(*v, 0.0)).collect(),
    )?);
    sy.apply_multiplier(|_, fy| Complex64::new(0.0, fy));
    let div_x = inverse_transform(&sx);
    let div_y = inverse_transform(&sy);

    let mut out = Vec::with_capacity(grid.num_points());
    for i in 0..grid.num_points() {
        let ddt_rho =
            0.5 * (next.0.values()[i].norm_sqr() - prev.0.values()[i].norm_sqr()) * inv_2dt;
        out.push(ddt_rho + div_x.values()[i].re + div_y.values()[i].re);
    }
    RealField::from_values(grid, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::profile::{gaussian, plane_wave, wave_vector};
    use crate::propagator::linear_propagate;
    use std::f64::consts::PI;

    #[test]
    fn boosted_gaussian_momentum_matches_closed_form() {
        // u = exp(i v.x) exp(-|x|^2/2): integral of p equals v * pi.
        let g = Grid::new(128, 30.0).unwrap();
        let v = [0.7, -0.4];
        let f = gaussian(g, 1.0, 1.0, v).unwrap();
        let got = momentum(&f);
        assert!((got[0] - v[0] * PI).abs() < 1e-9);
        assert!((got[1] - v[1] * PI).abs() < 1e-9);
        let (_, px, py) = densities(&f);
        assert!((px.integral() - v[0] * PI).abs() < 1e-9);
        assert!((py.integral() - v[1] * PI).abs() < 1e-9);
    }

    #[test]
    fn plane_wave_densities_are_constant() {
        let g = Grid::new(32, 8.0).unwrap();
        let a = 0.6;
        let mode = [2, -3];
        let f = plane_wave(g, a, mode).unwrap();
        let k = wave_vector(g, mode);
        let (rho, px, py) = densities(&f);
        for i in 0..g.num_points() {
            assert!((rho.values()[i] - 0.5 * a * a).abs() < 1e-12);
            assert!((px.values()[i] - a * a * k[0]).abs() < 1e-10);
            assert!((py.values()[i] - a * a * k[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn gaussian_correlation_density_matches_quadrature_closed_form() {
        // For u = exp(-|x|^2/2): FT(|u|^2) = pi exp(-|xi|^2/4) and
        // ||D^(1/2)|u|^2||_L2^2 = pi sqrt(2 pi) / 4. The |xi| weight has a
        // cone point at the origin, so the mode sum converges only at
        // O((2*pi/L)^3); measured relative errors are 9.1e-4 at L = 20 and
        // 2.7e-4 at L = 30, in the exact 1/L^3 ratio.
        let want = PI * (2.0 * PI).sqrt() / 4.0;
        let err_at = |l: f64| -> f64 {
            let g = Grid::new(128, l).unwrap();
            let f = gaussian(g, 1.0, 1.0, [0.0, 0.0]).unwrap();
            (correlation_density(&f) - want).abs() / want
        };
        let coarse = err_at(20.0);
        let fine = err_at(30.0);
        assert!(fine < 5e-4, "relative error {fine} at L = 30");
        let ratio = coarse / fine;
        assert!(
            (2.5..4.5).contains(&ratio),
            "box-refinement ratio {ratio} off the 1/L^3 law ({coarse} vs {fine})"
        );
    }

    #[test]
    fn correlation_density_is_phase_and_shift_invariant() {
        let g = Grid::new(64, 16.0).unwrap();
        let f = gaussian(g, 1.0, 1.2, [0.5, 0.0]).unwrap();
        let base = correlation_density(&f);
        let rotated = f.scaled(num_complex::Complex64::from_polar(1.0, 0.83));
        assert!((correlation_density(&rotated) - base).abs() < 1e-10 * base);
        // Cyclic shift by whole cells is exact on the torus.
        let n = g.n();
        let mut shifted = vec![num_complex::Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..n {
                shifted[j * n + i] = f.values()[((j + 5) % n) * n + ((i + 11) % n)];
            }
        }
        let fs = Field::from_values(g, shifted).unwrap();
        assert!((correlation_density(&fs) - base).abs() < 1e-10 * base);
    }

    #[test]
    fn morawetz_action_vanishes_for_real_data_and_grows_outward() {
        let g = Grid::new(64, 24.0).unwrap();
        let f = gaussian(g, 1.0, 1.0, [0.0, 0.0]).unwrap();
        // Real data carry no current.
        let m0 = morawetz_action(&f).unwrap();
        assert!(m0.abs() < 1e-12);
        // After free spreading the current points outward: M > 0.
        let later = linear_propagate(&f, 0.8);
        let m1 = morawetz_action(&later).unwrap();
        assert!(m1 > 1e-3, "expected outgoing action, got {m1}");
    }

    #[test]
    fn nls_energy_of_constant_field_matches_closed_form() {
        // Constant A on the box: E = A^(p+1) L^2 / (p+1), no kinetic part.
        let l = 6.0;
        let g = Grid::new(32, l).unwrap();
        let a = 1.1;
        let f = Field::from_fn(g, |_, _| num_complex::Complex64::new(a, 0.0));
        let p = 2.5;
        let e = energy(&f, &Equation::Nls { p }).unwrap();
        let want = a.powf(p + 1.0) * l * l / (p + 1.0);
        assert!((e - want).abs() < 1e-10 * want);
    }

    #[test]
    fn accumulator_handles_constant_samples_exactly() {
        let g = Grid::new(16, 3.0).unwrap();
        let a = 0.9;
        let f = Field::from_fn(g, |_, _| num_complex::Complex64::new(a, 0.0));
        let mut acc = SpaceTimeAccumulator::new(4.0, 8.0).unwrap();
        for k in 0..=10 {
            acc.update(&f, 0.1 * k as f64).unwrap();
        }
        // ||u||_L8 = a * L^(1/4); integral of norm^4 over [0,1] is norm^4.
        let want = (a * 3.0f64.powf(0.25)).powi(4).powf(0.25);
        assert!((acc.value() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn accumulator_rejects_out_of_order_samples_and_supports_sup() {
        let g = Grid::new(16, 3.0).unwrap();
        let f = Field::from_fn(g, |x, _| num_complex::Complex64::new(x, 0.0));
        let mut acc = SpaceTimeAccumulator::new(f64::INFINITY, 2.0).unwrap();
        acc.update(&f, 0.0).unwrap();
        acc.update(&f, 0.5).unwrap();
        assert!(acc.update(&f, 0.5).is_err());
        assert!(acc.update(&f, 0.2).is_err());
        let want = lebesgue_norm(&f, 2.0).unwrap();
        assert!((acc.value() - want).abs() < 1e-14);
        assert!(SpaceTimeAccumulator::new(0.5, 2.0).is_err());
    }

    #[test]
    fn local_mass_residual_vanishes_for_plane_wave_and_zero_field() {
        let g = Grid::new(32, 8.0).unwrap();
        let f = plane_wave(g, 0.8, [2, 1]).unwrap();
        let dt = 1e-2;
        let a = linear_propagate(&f, -dt);
        let c = linear_propagate(&f, dt);
        let res = local_mass_residual((&a, -dt), (&f, 0.0), (&c, dt)).unwrap();
        assert!(res.max_abs() < 1e-10);

        let z = Field::zeros(g);
        let res = local_mass_residual((&z, 0.0), (&z, 0.1), (&z, 0.2)).unwrap();
        assert!(res.max_abs() == 0.0);
    }

    #[test]
    fn local_mass_residual_is_second_order_in_spacing() {
        let g = Grid::new(64, 20.0).unwrap();
        let f = gaussian(g, 1.0, 1.0, [0.4, 0.0]).unwrap();
        let residual_at = |dt: f64| -> f64 {
            let a = linear_propagate(&f, -dt);
            let c = linear_propagate(&f, dt);
            local_mass_residual((&a, -dt), (&f, 0.0), (&c, dt))
                .unwrap()
                .max_abs()
        };
        let coarse = residual_at(1e-2);
        let fine = residual_at(5e-3);
        let ratio = coarse / fine;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn local_mass_residual_validates_spacing() {
        let g = Grid::new(16, 4.0).unwrap();
        let f = Field::zeros(g);
        assert!(local_mass_residual((&f, 0.0), (&f, 0.1), (&f, 0.3)).is_err());
        assert!(local_mass_residual((&f, 0.2), (&f, 0.1), (&f, 0.0)).is_err());
    }

    #[test]
    fn boundary_mass_fraction_detects_edge_mass() {
        let g = Grid::new(64, 16.0).unwrap();
        let centered = gaussian(g, 1.0, 0.5, [0.0, 0.0]).unwrap();
        assert!(boundary_mass_fraction(&centered) < 1e-10);
        let wide = gaussian(g, 1.0, 6.0, [0.0, 0.0]).unwrap();
        assert!(boundary_mass_fraction(&wide) > 0.1);
        assert_eq!(boundary_mass_fraction(&Field::zeros(g)), 0.0);
    }
}
