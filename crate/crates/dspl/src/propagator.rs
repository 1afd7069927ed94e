use crate::diagnostics::{self, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::fft::{fft2, Fft2};
use crate::field::{Field, RealField};
use crate::grid::Grid;
use crate::kernel::{convolver, KernelSpec};
use num_complex::Complex64;
use std::rc::Rc;

/// Relative boundary-mass level above which the periodic box no longer
/// faithfully approximates the plane; runs warn (or abort in strict mode).
pub const BOUNDARY_MASS_WARN: f64 = 1e-8;

/// The equation being integrated: i u_t + Lap u = N(u) u with N = 0,
/// N = |u|^(p-1) (defocusing NLS) or N = |x|^(-gamma) * |u|^2 (defocusing
/// Hartree).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equation {
    Linear,
    Nls { p: f64 },
    Hartree { gamma: f64 },
}

impl Equation {
    /// Hard validation plus soft warnings for parameters outside the range
    /// the a-priori estimates cover (pruned rather than enforced: runs are
    /// still meaningful as numerical experiments).
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        match *self {
            Equation::Linear => {}
            Equation::Nls { p } => {
                if !(p.is_finite() && p > 1.0) {
                    return Err(Error::InvalidArgument(format!(
                        "NLS power must be finite and > 1, got {p}"
                    )));
                }
                if !(2.0 < p && p < 3.0) {
                    warnings.push(format!(
                        "NLS power p = {p} is outside (2, 3); decay estimates are not covered"
                    ));
                }
            }
            Equation::Hartree { gamma } => {
                KernelSpec::Power { gamma }.validate()?;
                if !(1.0 < gamma && gamma < 2.0) {
                    warnings.push(format!(
                        "Hartree exponent gamma = {gamma} is outside (1, 2); \
                         decay estimates are not covered"
                    ));
                }
            }
        }
        Ok(warnings)
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, Equation::Linear)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Equation::Linear => "linear",
            Equation::Nls { .. } => "nls",
            Equation::Hartree { .. } => "hartree",
        }
    }
}

/// Time-stepping parameters for [`evolve`].
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_start: f64,
    pub t_end: f64,
    /// 2/3-rule spectral truncation after each nonlinear phase step.
    pub dealias: bool,
    /// Diagnostics cadence in steps; initial and final states always record.
    pub record_every: usize,
    /// Optional state-snapshot cadence in steps.
    pub snapshot_every: Option<usize>,
    /// Escalate the boundary-mass warning to a numerical abort.
    pub strict_boundary: bool,
}

impl SolverConfig {
    pub fn new(dt: f64, t_start: f64, t_end: f64) -> SolverConfig {
        SolverConfig {
            dt,
            t_start,
            t_end,
            dealias: false,
            record_every: 1,
            snapshot_every: None,
            strict_boundary: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt == 0.0 {
            return Err(Error::InvalidArgument(format!(
                "dt must be finite and nonzero, got {}",
                self.dt
            )));
        }
        if !self.t_start.is_finite() || !self.t_end.is_finite() {
            return Err(Error::InvalidArgument("times must be finite".into()));
        }
        let span = self.t_end - self.t_start;
        if span != 0.0 && span.signum() != self.dt.signum() {
            return Err(Error::InvalidArgument(format!(
                "dt sign ({}) does not match integration direction ({} -> {})",
                self.dt, self.t_start, self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be >= 1".into()));
        }
        if self.snapshot_every == Some(0) {
            return Err(Error::InvalidArgument("snapshot_every must be >= 1".into()));
        }
        Ok(())
    }

    /// Whole steps plus an optional shortened final step covering the
    /// remainder of the interval.
    fn plan(&self) -> (usize, Option<f64>) {
        let span = self.t_end - self.t_start;
        if span == 0.0 {
            return (0, None);
        }
        let total = span / self.dt; // > 0 by validation
        let rounded = total.round();
        if (total - rounded).abs() <= 1e-9 * total.max(1.0) {
            (rounded as usize, None)
        } else {
            let full = total.floor() as usize;
            let rest = self.t_end - (self.t_start + full as f64 * self.dt);
            (full, Some(rest))
        }
    }
}

/// Result of an [`evolve`] run: diagnostics at the record cadence, optional
/// state snapshots, the final state and any soft warnings raised.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub equation: Equation,
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<(f64, Field)>,
    pub final_field: Field,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn final_time(&self) -> f64 {
        self.records.last().map(|r| r.time).unwrap_or(0.0)
    }
}

/// Exact propagator of the free equation: every Fourier coefficient picks up
/// the phase `exp(-i |xi|^2 t)`. Unitary on every Sobolev norm.
pub fn linear_propagate(f: &Field, t: f64) -> Field {
    if t == 0.0 {
        return f.clone();
    }
    let grid = f.grid();
    let n = grid.n();
    let engine = fft2(n);
    let mut buf = f.values().to_vec();
    engine.forward_transposed(&mut buf);
    let table = linear_phase_table(grid, t);
    for (b, m) in buf.iter_mut().zip(&table) {
        *b *= m;
    }
    engine.inverse_transposed(&mut buf);
    let scale = 1.0 / (n * n) as f64;
    for b in &mut buf {
        *b *= scale;
    }
    Field::from_values(grid, buf).expect("linear propagation produced non-finite state")
}

/// Symmetric frequency table `exp(-i |xi|^2 dur)`; layout-agnostic because
/// the multiplier is symmetric under (kx, ky) swap.
fn linear_phase_table(grid: Grid, dur: f64) -> Vec<Complex64> {
    let n = grid.n();
    let freqs = grid.frequencies();
    let mut table = Vec::with_capacity(n * n);
    for fy in &freqs {
        for fx in &freqs {
            table.push(Complex64::from_polar(1.0, -(fx * fx + fy * fy) * dur));
        }
    }
    table
}

/// 2/3-rule mask: modes with either signed index above n/3 are dropped.
fn dealias_mask(grid: Grid) -> Vec<f64> {
    let n = grid.n();
    let cut = n / 3;
    let keep = |k: usize| -> bool {
        let signed = if k < n / 2 {
            k as isize
        } else {
            k as isize - n as isize
        };
        signed.unsigned_abs() <= cut
    };
    let mut mask = Vec::with_capacity(n * n);
    for b in 0..n {
        for a in 0..n {
            mask.push(if keep(a) && keep(b) { 1.0 } else { 0.0 });
        }
    }
    mask
}

/// `|u|^(p-1)` from `q = |u|^2`, i.e. `q^((p-1)/2)`, with fast paths for the
/// exponents that appear in practice. `q = 0` maps to 0 for every p > 1.
#[inline]
fn amplitude_power(q: f64, half_pm1: f64) -> f64 {
    if half_pm1 == 0.75 {
        // p = 2.5: q^(3/4) = sqrt(q * sqrt(q))
        (q * q.sqrt()).sqrt()
    } else if half_pm1 == 0.5 {
        q.sqrt()
    } else if half_pm1 == 1.0 {
        q
    } else {
        q.powf(half_pm1)
    }
}

/// Applies the exact nonlinear sub-flow over `dur` in place.
fn apply_nonlinear_phase(eq: &Equation, grid: Grid, values: &mut [Complex64], dur: f64) -> Result<()> {
    match *eq {
        Equation::Linear => Ok(()),
        Equation::Nls { p } => {
            let e = 0.5 * (p - 1.0);
            for v in values.iter_mut() {
                let amp = amplitude_power(v.norm_sqr(), e);
                let (s, c) = (-amp * dur).sin_cos();
                *v *= Complex64::new(c, s);
            }
            Ok(())
        }
        Equation::Hartree { gamma } => {
            let conv = convolver(grid, KernelSpec::Power { gamma })?;
            let density =
                RealField::from_values(grid, values.iter().map(|z| z.norm_sqr()).collect())?;
            let potential = conv.apply(&density)?;
            for (v, pot) in values.iter_mut().zip(potential.values()) {
                let (s, c) = (-pot * dur).sin_cos();
                *v *= Complex64::new(c, s);
            }
            Ok(())
        }
    }
}

/// Exact solution of the nonlinear sub-flow: `u -> u * exp(-i N(u) dt)`
/// where N is `|u|^(p-1)` or the Hartree potential. The modulus of every
/// sample is preserved.
pub fn nonlinear_phase_step(f: &Field, eq: &Equation, dt: f64) -> Result<Field> {
    if eq.is_linear() {
        return Err(Error::InvalidArgument(
            "nonlinear phase step requires the NLS or Hartree equation".into(),
        ));
    }
    eq.validate()?;
    let mut values = f.values().to_vec();
    apply_nonlinear_phase(eq, f.grid(), &mut values, dt)?;
    Field::from_values(f.grid(), values)
}

/// Hartree interaction potential `|x|^(-gamma) * |u|^2` with the truncated
/// kernel; real and nonnegative up to quadrature error.
pub fn hartree_potential(f: &Field, gamma: f64) -> Result<RealField> {
    let conv = convolver(f.grid(), KernelSpec::Power { gamma })?;
    conv.apply(&f.modulus_squared())
}

/// One Strang step: half nonlinear phase, exact full linear step, half
/// nonlinear phase. Both sub-flows are exactly solvable, so the only error
/// is the O(dt^3) local splitting error; for the linear equation this is
/// `linear_propagate(f, dt)` to round-off.
pub fn strang_step(f: &Field, eq: &Equation, dt: f64) -> Result<Field> {
    eq.validate()?;
    if !dt.is_finite() {
        return Err(Error::InvalidArgument("dt must be finite".into()));
    }
    let grid = f.grid();
    let n = grid.n();
    let mut values = f.values().to_vec();
    apply_nonlinear_phase(eq, grid, &mut values, 0.5 * dt)?;
    let engine = fft2(n);
    engine.forward_transposed(&mut values);
    let table = linear_phase_table(grid, dt);
    for (v, m) in values.iter_mut().zip(&table) {
        *v *= m;
    }
    engine.inverse_transposed(&mut values);
    let scale = 1.0 / (n * n) as f64;
    for v in &mut values {
        *v *= scale;
    }
    apply_nonlinear_phase(eq, grid, &mut values, 0.5 * dt)?;
    Field::from_values(grid, values)
}

/// Lazily materialized solver state: physical samples and unnormalized
/// spectral coefficients (transposed layout), whichever is current.
struct State {
    grid: Grid,
    engine: Rc<Fft2>,
    data: Vec<Complex64>,
    spectral: bool,
}

impl State {
    fn new(f: &Field) -> State {
        State {
            grid: f.grid(),
            engine: fft2(f.grid().n()),
            data: f.values().to_vec(),
            spectral: false,
        }
    }

    fn to_spectral(&mut self) {
        if !self.spectral {
            self.engine.forward_transposed(&mut self.data);
            self.spectral = true;
        }
    }

    fn to_physical(&mut self) {
        if self.spectral {
            self.engine.inverse_transposed(&mut self.data);
            let scale = 1.0 / self.grid.num_points() as f64;
            for v in &mut self.data {
                *v *= scale;
            }
            self.spectral = false;
        }
    }

    fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn field(&mut self) -> Result<Field> {
        self.to_physical();
        Field::from_values(self.grid, self.data.clone())
    }
}

/// Integrates `f0` from `t_start` to `t_end` by Strang splitting, recording
/// diagnostics (and optional snapshots) at the configured cadences and
/// invoking `hook` with the state at every record point.
///
/// Half phases of adjacent steps are fused into single applications; the
/// recorded states are identical to repeated [`strang_step`] up to round-off
/// and the step sequence is identical for identical configurations, so runs
/// are bit-reproducible.
pub fn evolve(
    f0: &Field,
    eq: &Equation,
    cfg: &SolverConfig,
    mut hook: impl FnMut(&Field, f64, usize) -> Result<()>,
) -> Result<Trajectory> {
    let eq_warnings = eq.validate()?;
    cfg.validate()?;
    let grid = f0.grid();
    let (full_steps, partial) = cfg.plan();
    let total_steps = full_steps + usize::from(partial.is_some());

    let time_of = |step: usize| -> f64 {
        if step == total_steps {
            // the final boundary is the requested end time by construction
            if total_steps == 0 {
                cfg.t_start
            } else {
                cfg.t_end
            }
        } else {
            cfg.t_start + step as f64 * cfg.dt
        }
    };
    let duration_of = |step: usize| -> f64 {
        if step < full_steps {
            cfg.dt
        } else {
            partial.expect("step index beyond plan")
        }
    };

    let lin_full = linear_phase_table(grid, cfg.dt);
    let lin_partial = partial.map(|d| linear_phase_table(grid, d));
    let mask = if cfg.dealias {
        Some(dealias_mask(grid))
    } else {
        None
    };

    let mut state = State::new(f0);
    let mut records = Vec::new();
    let mut snapshots = Vec::new();
    let mut warnings = eq_warnings;
    let mut max_boundary_fraction = 0.0f64;

    let record_at =
        |step: usize| -> bool { step % cfg.record_every == 0 || step == total_steps };
    let snapshot_at = |step: usize| -> bool {
        cfg.snapshot_every
            .map(|c| step % c == 0 || step == total_steps)
            .unwrap_or(false)
    };

    // Shared record/snapshot/hook emission at a step boundary.
    let mut emit = |state: &mut State, step: usize, records: &mut Vec<DiagnosticsRecord>,
                    snapshots: &mut Vec<(f64, Field)>, max_bf: &mut f64|
     -> Result<()> {
        let t = time_of(step);
        if record_at(step) {
            let field = state.field()?;
            let rec = diagnostics::record(&field, eq, t)?;
            if rec.boundary_mass_fraction > *max_bf {
                *max_bf = rec.boundary_mass_fraction;
            }
            if cfg.strict_boundary && rec.boundary_mass_fraction > BOUNDARY_MASS_WARN {
                return Err(Error::Numerical(format!(
                    "boundary mass fraction {:.3e} exceeds {:.0e} at t = {} (strict mode)",
                    rec.boundary_mass_fraction, BOUNDARY_MASS_WARN, t
                )));
            }
            records.push(rec);
            hook(&field, t, step)?;
            if snapshot_at(step) {
                snapshots.push((t, field));
            }
        } else if snapshot_at(step) {
            snapshots.push((t, state.field()?));
        }
        Ok(())
    };

    // Applies the dealias mask in spectral space right after a nonlinear
    // phase application, matching the unfused step ordering.
    let apply_mask = |state: &mut State, mask: &Option<Vec<f64>>| {
        if let Some(m) = mask {
            state.to_spectral();
            for (v, w) in state.data.iter_mut().zip(m) {
                *v *= *w;
            }
        }
    };

    emit(&mut state, 0, &mut records, &mut snapshots, &mut max_boundary_fraction)?;

    if total_steps > 0 {
        state.to_physical();
        apply_nonlinear_phase(eq, grid, &mut state.data, 0.5 * duration_of(0))?;
        apply_mask(&mut state, &mask);

        for step in 0..total_steps {
            state.to_spectral();
            let table = if step < full_steps {
                &lin_full
            } else {
                lin_partial.as_ref().expect("partial table")
            };
            for (v, m) in state.data.iter_mut().zip(table) {
                *v *= m;
            }
            if !state.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite state after step {} (t = {})",
                    step + 1,
                    time_of(step + 1)
                )));
            }

            let boundary = step + 1;
            let last = boundary == total_steps;
            if last {
                state.to_physical();
                apply_nonlinear_phase(eq, grid, &mut state.data, 0.5 * duration_of(step))?;
                apply_mask(&mut state, &mask);
                emit(&mut state, boundary, &mut records, &mut snapshots, &mut max_boundary_fraction)?;
            } else if record_at(boundary) || snapshot_at(boundary) {
                state.to_physical();
                apply_nonlinear_phase(eq, grid, &mut state.data, 0.5 * duration_of(step))?;
                apply_mask(&mut state, &mask);
                emit(&mut state, boundary, &mut records, &mut snapshots, &mut max_boundary_fraction)?;
                state.to_physical();
                apply_nonlinear_phase(eq, grid, &mut state.data, 0.5 * duration_of(boundary))?;
                apply_mask(&mut state, &mask);
            } else {
                state.to_physical();
                let fused = 0.5 * (duration_of(step) + duration_of(boundary));
                apply_nonlinear_phase(eq, grid, &mut state.data, fused)?;
                apply_mask(&mut state, &mask);
            }
        }
    }

    if max_boundary_fraction > BOUNDARY_MASS_WARN {
        warnings.push(format!(
            "boundary mass fraction reached {max_boundary_fraction:.3e} \
             (box approximation of the plane degraded)"
        ));
    }

    let final_field = state.field()?;
    Ok(Trajectory {
        equation: *eq,
        records,
        snapshots,
        final_field,
        warnings,
    })
}

/// The nonlinearity N(u)*u as a field: zero (linear), `|u|^(p-1) u` (NLS) or
/// `(|x|^(-gamma) * |u|^2) u` (Hartree).
pub fn nonlinearity(f: &Field, eq: &Equation) -> Result<Field> {
    match *eq {
        Equation::Linear => Ok(Field::zeros(f.grid())),
        Equation::Nls { p } => {
            let e = 0.5 * (p - 1.0);
            let values = f
                .values()
                .iter()
                .map(|z| z * amplitude_power(z.norm_sqr(), e))
                .collect();
            Field::from_values(f.grid(), values)
        }
        Equation::Hartree { gamma } => {
            let pot = hartree_potential(f, gamma)?;
            let values = f
                .values()
                .iter()
                .zip(pot.values())
                .map(|(z, v)| z * *v)
                .collect();
            Field::from_values(f.grid(), values)
        }
    }
}
