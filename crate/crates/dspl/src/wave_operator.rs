//! Scattering-profile experiment: given an asymptotic profile, solve the
//! nonlinear equation backward from linear data at a ladder of horizons and
//! measure how the reconstructed initial states converge.
//!
//! For a profile `u+` let `v(t)` be its free evolution. For each horizon `T`
//! the experiment solves the nonlinear flow backward from `w(T) = v(T)` down
//! to `t = 0`, producing `w_T(0)`. As `T` grows the family `w_T(0)` becomes
//! Cauchy in `H^1` and the forward solutions track `v` ever more closely —
//! the quantitative content of wave-operator existence, measured here as
//! distance tables rather than proved.

use crate::diagnostics;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::propagator::{evolve, linear_propagate, Equation, SolverConfig};
use crate::spectral::{lebesgue_norm, sobolev_norm};
use serde::Serialize;

/// Relative slack when testing the exact mass identity
/// `||w_T(0)||_L2 = ||u+||_L2` (two isometries compose; only FFT round-off
/// accumulates).
pub const MASS_IDENTITY_TOL: f64 = 1e-10;
/// Relative slack on the kinetic energy floor `E[w_T(0)] >= 1/2 ||grad u+||^2`.
pub const ENERGY_FLOOR_SLACK: f64 = 1e-4;
/// Relative slack when requiring `E[w_T(0)]` to be nonincreasing in `T`.
pub const ENERGY_MONOTONE_SLACK: f64 = 1e-6;
/// Successive Cauchy distances may not grow by more than this factor.
pub const NON_CAUCHY_SLACK: f64 = 1e-9;

/// A profile, an equation, a horizon ladder, and the solver step used for
/// every backward/forward run of the experiment.
#[derive(Debug, Clone)]
pub struct WaveOperatorExperiment {
    u_plus: Field,
    eq: Equation,
    horizons: Vec<f64>,
    dt: f64,
    record_every: usize,
    strict_boundary: bool,
}

/// One backward solve: the reconstructed state at `t = 0`, the linear data
/// it started from, and any solver warnings (boundary-mass breaches).
#[derive(Debug, Clone)]
pub struct BackwardRun {
    pub w0: Field,
    pub v_t: Field,
    pub warnings: Vec<String>,
}

/// Distances between successive reconstructed initial states.
#[derive(Debug, Clone, Serialize)]
pub struct CauchyRow {
    pub t_prev: f64,
    pub t_next: f64,
    pub h1: f64,
    pub l2: f64,
    pub lp: f64,
}

/// The `t = 0` half of the convergence measurement: one reconstructed state
/// per horizon and the distance table between neighbours.
#[derive(Debug, Clone, Serialize)]
pub struct CauchyReport {
    pub horizons: Vec<f64>,
    pub rows: Vec<CauchyRow>,
    /// Set when some successive H^1 distance grows beyond slack.
    pub non_cauchy: bool,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub w0_states: Vec<Field>,
}

/// Distances between the forward-evolved reconstruction and the free
/// solution at one sample time, plus the free solution's own L^p size.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceRow {
    pub t: f64,
    pub h1: f64,
    pub l2: f64,
    pub lp: f64,
    pub v_lp: f64,
}

/// The per-time half of the convergence measurement for the largest horizon.
#[derive(Debug, Clone, Serialize)]
pub struct ForwardReport {
    pub t_ref: f64,
    pub rows: Vec<DistanceRow>,
    /// Log-log slope of the H^1 distance over the interior samples
    /// (reported for inspection, never asserted: only decay itself is the
    /// claim, not its rate).
    pub h1_rate: Option<f64>,
    pub warnings: Vec<String>,
}

/// Energy/mass bookkeeping of the reconstructed states.
#[derive(Debug, Clone, Serialize)]
pub struct NormBudgetRow {
    pub horizon: f64,
    pub mass: f64,
    pub energy: f64,
    pub potential: f64,
    /// `E[w_T(0)] - 1/2 ||grad u+||^2`, the part that must shrink with T.
    pub excess: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NormBudgetReport {
    pub profile_mass: f64,
    pub kinetic_floor: f64,
    pub rows: Vec<NormBudgetRow>,
    pub mass_ok: bool,
    pub energy_floor_ok: bool,
    pub excess_decreasing: bool,
    pub pass: bool,
}

/// Solves the equation backward from `w(T) = U(T) u_plus` to `t = 0`.
/// Exposed standalone so the linear control (an exact identity: backward
/// free flow inverts the forward one) can be exercised with any equation.
pub fn backward_from_profile(
    u_plus: &Field,
    eq: &Equation,
    dt: f64,
    t_final: f64,
    record_every: usize,
    strict_boundary: bool,
) -> Result<BackwardRun> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "backward solve needs a positive step, got {dt}"
        )));
    }
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "backward solve needs a positive horizon, got {t_final}"
        )));
    }
    let v_t = linear_propagate(u_plus, t_final);
    let mut cfg = SolverConfig::new(-dt, t_final, 0.0);
    cfg.record_every = record_every;
    cfg.strict_boundary = strict_boundary;
    let traj = evolve(&v_t, eq, &cfg, |_, _, _| Ok(()))?;
    Ok(BackwardRun {
        w0: traj.final_field,
        v_t,
        warnings: traj.warnings,
    })
}

impl WaveOperatorExperiment {
    /// A nonlinear experiment. The horizon ladder must be strictly
    /// increasing and positive; the linear flow is rejected here because the
    /// experiment is vacuous for it (see [`Self::linear_control`]).
    pub fn new(u_plus: Field, eq: Equation, horizons: Vec<f64>, dt: f64) -> Result<Self> {
        if eq.is_linear() {
            return Err(Error::InvalidArgument(
                "wave-operator experiment needs a nonlinear equation; \
                 use linear_control for the identity check"
                    .into(),
            ));
        }
        Self::build(u_plus, eq, horizons, dt)
    }

    /// The linear control experiment: every reconstruction equals the
    /// profile exactly, every distance vanishes. Useful as a scheme check.
    pub fn linear_control(u_plus: Field, horizons: Vec<f64>, dt: f64) -> Result<Self> {
        Self::build(u_plus, Equation::Linear, horizons, dt)
    }

    fn build(u_plus: Field, eq: Equation, horizons: Vec<f64>, dt: f64) -> Result<Self> {
        eq.validate()?;
        if horizons.is_empty() {
            return Err(Error::InvalidArgument("horizon ladder is empty".into()));
        }
        if !horizons[0].is_finite() || horizons[0] <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "horizons must be positive, got {}",
                horizons[0]
            )));
        }
        for w in horizons.windows(2) {
            if !(w[0] < w[1] && w[1].is_finite()) {
                return Err(Error::InvalidArgument(
                    "horizon ladder must be strictly increasing".into(),
                ));
            }
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "solver step must be positive, got {dt}"
            )));
        }
        Ok(WaveOperatorExperiment {
            u_plus,
            eq,
            horizons,
            dt,
            record_every: 250,
            strict_boundary: false,
        })
    }

    pub fn with_record_every(mut self, every: usize) -> Result<Self> {
        if every == 0 {
            return Err(Error::InvalidArgument(
                "record cadence must be at least 1".into(),
            ));
        }
        self.record_every = every;
        Ok(self)
    }

    pub fn with_strict_boundary(mut self, strict: bool) -> Self {
        self.strict_boundary = strict;
        self
    }

    pub fn u_plus(&self) -> &Field {
        &self.u_plus
    }

    pub fn equation(&self) -> &Equation {
        &self.eq
    }

    pub fn horizons(&self) -> &[f64] {
        &self.horizons
    }

    /// Lebesgue exponent for the nonlinearity-adapted distance: `p + 1` for
    /// NLS; 4 for Hartree and the linear control (the convolution
    /// nonlinearity is quartic in u, making L^4 its natural size).
    pub fn lp_exponent(&self) -> f64 {
        match self.eq {
            Equation::Nls { p } => p + 1.0,
            _ => 4.0,
        }
    }

    /// The free solution `v(t) = U(t) u_plus`.
    pub fn free_solution(&self, t: f64) -> Field {
        linear_propagate(&self.u_plus, t)
    }

    /// One backward solve at horizon `t_final`.
    pub fn construct_wt(&self, t_final: f64) -> Result<BackwardRun> {
        backward_from_profile(
            &self.u_plus,
            &self.eq,
            self.dt,
            t_final,
            self.record_every,
            self.strict_boundary,
        )
    }

    /// Reconstructs `w_T(0)` for every horizon and tabulates successive
    /// distances in H^1, L^2 and the nonlinearity-adapted L^p.
    pub fn cauchy_report(&self) -> Result<CauchyReport> {
        if self.horizons.len() < 2 {
            return Err(Error::InvalidArgument(
                "cauchy table needs at least two horizons".into(),
            ));
        }
        let lp = self.lp_exponent();
        let mut states = Vec::with_capacity(self.horizons.len());
        let mut warnings = Vec::new();
        for &t in &self.horizons {
            let run = self.construct_wt(t)?;
            warnings.extend(run.warnings.into_iter().map(|w| format!("T = {t}: {w}")));
            states.push(run.w0);
        }
        let mut rows = Vec::with_capacity(states.len() - 1);
        for (k, pair) in states.windows(2).enumerate() {
            let diff = pair[1].sub(&pair[0])?;
            rows.push(CauchyRow {
                t_prev: self.horizons[k],
                t_next: self.horizons[k + 1],
                h1: sobolev_norm(&diff, 1.0),
                l2: lebesgue_norm(&diff, 2.0)?,
                lp: lebesgue_norm(&diff, lp)?,
            });
        }
        // Growth below the round-off floor (linear control: all distances
        // ~1e-14) is noise, not divergence.
        let floor = 1e-12 * sobolev_norm(&self.u_plus, 1.0);
        let non_cauchy = rows
            .windows(2)
            .any(|w| w[1].h1 > w[0].h1 * (1.0 + NON_CAUCHY_SLACK) && w[1].h1 > floor);
        Ok(CauchyReport {
            horizons: self.horizons.clone(),
            rows,
            non_cauchy,
            warnings,
            w0_states: states,
        })
    }

    /// Evolves the reconstruction from the largest horizon forward and
    /// measures its distance to the free solution at the sample times.
    pub fn forward_convergence(&self, sample_times: &[f64]) -> Result<ForwardReport> {
        let t_ref = *self.horizons.last().expect("validated nonempty");
        if sample_times.is_empty() {
            return Err(Error::InvalidArgument("no sample times given".into()));
        }
        for w in sample_times.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidArgument(
                    "sample times must be strictly increasing".into(),
                ));
            }
        }
        if !(sample_times[0] > 0.0) {
            return Err(Error::InvalidArgument(
                "sample times must be positive".into(),
            ));
        }
        if sample_times.last().copied().unwrap_or(0.0) > t_ref * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "sample times must stay within the largest horizon {t_ref}"
            )));
        }
        let run = self.construct_wt(t_ref)?;
        let mut warnings = run.warnings;
        let lp = self.lp_exponent();

        let mut rows = Vec::with_capacity(sample_times.len());
        let mut state = run.w0;
        let mut t_prev = 0.0;
        for &t in sample_times {
            let mut cfg = SolverConfig::new(self.dt, t_prev, t);
            cfg.record_every = usize::MAX;
            cfg.strict_boundary = self.strict_boundary;
            let seg = evolve(&state, &self.eq, &cfg, |_, _, _| Ok(()))?;
            warnings.extend(
                seg.warnings
                    .into_iter()
                    .map(|w| format!("segment ending at t = {t}: {w}")),
            );
            state = seg.final_field;
            let v = self.free_solution(t);
            let diff = state.sub(&v)?;
            rows.push(DistanceRow {
                t,
                h1: sobolev_norm(&diff, 1.0),
                l2: lebesgue_norm(&diff, 2.0)?,
                lp: lebesgue_norm(&diff, lp)?,
                v_lp: lebesgue_norm(&v, lp)?,
            });
            t_prev = t;
        }

        // Fit over interior samples only: the distance at t_ref is zero by
        // construction and would dominate a log fit.
        let interior: Vec<&DistanceRow> = rows
            .iter()
            .filter(|r| r.t < t_ref * (1.0 - 1e-12) && r.h1 > 0.0)
            .collect();
        let h1_rate = if interior.len() >= 2 {
            let ts: Vec<f64> = interior.iter().map(|r| r.t).collect();
            let ds: Vec<f64> = interior.iter().map(|r| r.h1).collect();
            crate::estimates::fit_loglog(&ts, &ds, 0.0).ok().map(|(s, _)| s)
        } else {
            None
        };
        Ok(ForwardReport {
            t_ref,
            rows,
            h1_rate,
            warnings,
        })
    }

    /// Mass and energy bookkeeping across the reconstructions: the exact
    /// mass identity, the kinetic floor, and the decay of the energy excess
    /// `E[w_T(0)] - 1/2 ||grad u+||^2` (which equals the free solution's
    /// potential energy at the matching time, hence must shrink as the
    /// profile disperses).
    pub fn norm_budget(&self, cauchy: &CauchyReport) -> Result<NormBudgetReport> {
        if cauchy.w0_states.len() != cauchy.horizons.len() {
            return Err(Error::InvalidArgument(
                "cauchy report is missing reconstructed states".into(),
            ));
        }
        let profile_mass = diagnostics::mass(&self.u_plus);
        let grad = crate::spectral::gradient(&self.u_plus);
        let kinetic_floor = 0.5
            * (diagnostics::mass(&grad.0) + diagnostics::mass(&grad.1));
        let mut rows = Vec::with_capacity(cauchy.w0_states.len());
        for (state, &horizon) in cauchy.w0_states.iter().zip(&cauchy.horizons) {
            let mass = diagnostics::mass(state);
            let energy = diagnostics::energy(state, &self.eq)?;
            let potential = diagnostics::potential_energy(state, &self.eq)?;
            rows.push(NormBudgetRow {
                horizon,
                mass,
                energy,
                potential,
                excess: energy - kinetic_floor,
            });
        }
        let mass_ok = rows
            .iter()
            .all(|r| (r.mass - profile_mass).abs() <= MASS_IDENTITY_TOL * profile_mass.max(1e-300));
        let energy_floor_ok = rows
            .iter()
            .all(|r| r.energy >= kinetic_floor * (1.0 - ENERGY_FLOOR_SLACK));
        let excess_decreasing = rows.windows(2).all(|w| {
            w[1].excess <= w[0].excess + ENERGY_MONOTONE_SLACK * w[0].energy.abs().max(1e-300)
        });
        let pass = mass_ok && energy_floor_ok && excess_decreasing;
        Ok(NormBudgetReport {
            profile_mass,
            kinetic_floor,
            rows,
            mass_ok,
            energy_floor_ok,
            excess_decreasing,
            pass,
        })
    }

    /// Forward-evolves the reconstruction back to its horizon and returns
    /// the H^1 distance to the linear data it was built from — the scheme's
    /// round-trip error (exact sub-flows invert step by step, so only FFT
    /// round-off accumulates).
    pub fn round_trip_error(&self, t_final: f64) -> Result<f64> {
        let run = self.construct_wt(t_final)?;
        let mut cfg = SolverConfig::new(self.dt, 0.0, t_final);
        cfg.record_every = usize::MAX;
        let forward = evolve(&run.w0, &self.eq, &cfg, |_, _, _| Ok(()))?;
        Ok(sobolev_norm(&forward.final_field.sub(&run.v_t)?, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::profile::gaussian;

    fn profile(n: usize, l: f64) -> Field {
        gaussian(Grid::new(n, l).unwrap(), 0.3, 1.5, [0.0, 0.0]).unwrap()
    }

    #[test]
    fn experiment_validates_inputs() {
        let u = profile(16, 10.0);
        let nls = Equation::Nls { p: 2.5 };
        assert!(WaveOperatorExperiment::new(u.clone(), Equation::Linear, vec![1.0], 0.1).is_err());
        assert!(WaveOperatorExperiment::new(u.clone(), nls, vec![], 0.1).is_err());
        assert!(WaveOperatorExperiment::new(u.clone(), nls, vec![2.0, 1.0], 0.1).is_err());
        assert!(WaveOperatorExperiment::new(u.clone(), nls, vec![-1.0, 1.0], 0.1).is_err());
        assert!(WaveOperatorExperiment::new(u.clone(), nls, vec![1.0, 2.0], 0.0).is_err());
        let exp = WaveOperatorExperiment::new(u.clone(), nls, vec![1.0, 2.0], 0.1).unwrap();
        assert!(exp.with_record_every(0).is_err());
        assert!(WaveOperatorExperiment::linear_control(u, vec![1.0], 0.1).is_ok());
    }

    #[test]
    fn linear_backward_solve_is_the_identity() {
        let u = profile(64, 20.0);
        for t in [0.7, 2.0] {
            let run = backward_from_profile(&u, &Equation::Linear, 1e-2, t, 50, false).unwrap();
            let err = sobolev_norm(&run.w0.sub(&u).unwrap(), 1.0);
            assert!(err < 1e-11, "T={t}: {err}");
        }
    }

    #[test]
    fn zero_profile_reconstructs_to_zero() {
        let g = Grid::new(32, 10.0).unwrap();
        let run =
            backward_from_profile(&Field::zeros(g), &Equation::Nls { p: 2.5 }, 1e-2, 1.0, 50, false)
                .unwrap();
        assert!(diagnostics::mass(&run.w0) == 0.0);
    }

    #[test]
    fn linear_control_cauchy_distances_vanish() {
        let exp =
            WaveOperatorExperiment::linear_control(profile(32, 12.0), vec![0.5, 1.0, 2.0], 1e-2)
                .unwrap();
        let rep = exp.cauchy_report().unwrap();
        assert_eq!(rep.rows.len(), 2);
        for row in &rep.rows {
            assert!(row.h1 < 1e-11, "h1 {}", row.h1);
            assert!(row.l2 < 1e-11);
        }
        assert!(!rep.non_cauchy);

        let budget = exp.norm_budget(&rep).unwrap();
        assert!(budget.pass);
        for row in &budget.rows {
            assert_eq!(row.potential, 0.0, "linear flow has no potential energy");
            assert!((row.energy - budget.kinetic_floor).abs() <= 1e-12 * budget.kinetic_floor);
        }
    }

    #[test]
    fn linear_control_forward_distances_vanish() {
        let exp = WaveOperatorExperiment::linear_control(profile(32, 12.0), vec![1.0], 1e-2)
            .unwrap();
        let rep = exp.forward_convergence(&[0.25, 0.5, 1.0]).unwrap();
        for row in &rep.rows {
            assert!(row.h1 < 1e-11, "t={}: {}", row.t, row.h1);
        }
        assert!(exp.forward_convergence(&[0.5, 1.5]).is_err(), "beyond horizon");
        assert!(exp.forward_convergence(&[0.5, 0.5]).is_err(), "not increasing");
        assert!(exp.forward_convergence(&[]).is_err());
    }

    #[test]
    fn nls_round_trip_is_tiny() {
        let exp = WaveOperatorExperiment::new(
            profile(64, 20.0),
            Equation::Nls { p: 2.5 },
            vec![1.0],
            1e-2,
        )
        .unwrap();
        let err = exp.round_trip_error(1.0).unwrap();
        assert!(err < 1e-10, "round trip {err}");
    }

    #[test]
    fn nls_mass_identity_holds() {
        let exp = WaveOperatorExperiment::new(
            profile(32, 16.0),
            Equation::Nls { p: 2.5 },
            vec![0.5, 1.0],
            1e-2,
        )
        .unwrap();
        let rep = exp.cauchy_report().unwrap();
        let budget = exp.norm_budget(&rep).unwrap();
        assert!(budget.mass_ok, "{:?}", budget.rows);
        assert!(budget.energy_floor_ok);
    }
}
