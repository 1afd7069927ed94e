//! TOML run configuration.
//!
//! Schema (all sections flat; unknown keys are rejected with the offending
//! key named; numeric ranges are validated on parse):
//!
//! ```toml
//! seed = 42                      # optional; required for `verify`
//!
//! [equation]
//! kind = "nls"                   # "linear" | "nls" | "hartree"
//! p = 2.5                        # required for nls, forbidden otherwise
//! gamma = 1.5                    # required for hartree, forbidden otherwise
//!
//! [grid]
//! n = 256                        # power of two
//! box_length = 40.0
//!
//! [solver]
//! dt = 1e-3
//! horizon = 10.0                 # run covers [t_start, t_start + horizon]
//! t_start = 0.0                  # optional, default 0
//! dealias = false                # optional; default: on for NLS with p >= 3
//! record_every = 100             # optional, default 1 (steps per record)
//! snapshot_every = 500           # optional (steps per stored state)
//! strict_boundary = false        # optional; escalates the boundary warning
//!
//! [experiment]                   # optional; defaults to the CLI verb
//! kind = "simulate"              # simulate | verify-estimates |
//!                                #   wave-operator | decay-probe
//! pairs = [[4.0, 8.0]]           # verify: space-time exponent pairs
//! horizons = [4.0, 8.0]          # wave-operator ladder
//! sample_times = [4.0, 16.0]     # wave-operator forward samples
//! window = [2.0, 20.0]           # decay: fit window
//! decay_samples = 24             # decay: sample count in the window
//! ladder = [1.0, 2.0, 4.0]       # decay: dyadic window starts
//!
//! [profile]
//! kind = "gaussian"              # gaussian | plane-wave | bump | file
//! amplitude = 1.0
//! width = 1.0                    # gaussian
//! boost = [0.5, 0.3]             # gaussian, optional
//! mode = [3, -2]                 # plane-wave
//! radius = 4.0                   # bump
//! path = "state.dspl"            # file (checkpoint to load)
//!
//! [output]                       # optional
//! directory = "out"
//! checkpoint_every = 1000        # steps; must be a multiple of record_every
//!
//! [sweep]                        # only read by the sweep command
//! p = [2.2, 2.5, 2.8]            # axes in fixed order: p, gamma, horizon, n, dt
//! horizon = [4.0, 8.0]
//! ```

use crate::checkpoint;
use crate::error::{Error, Result};
use crate::estimates::admissible_pair;
use crate::field::Field;
use crate::grid::Grid;
use crate::profile;
use crate::propagator::{Equation, SolverConfig};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub equation: EquationSection,
    pub grid: GridSection,
    pub solver: SolverSection,
    #[serde(default, skip_serializing_if = "ExperimentSection::is_empty")]
    pub experiment: ExperimentSection,
    pub profile: ProfileSection,
    #[serde(default, skip_serializing_if = "OutputSection::is_empty")]
    pub output: OutputSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationSection {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub box_length: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub dt: f64,
    pub horizon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dealias: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record_every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict_boundary: Option<bool>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizons: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_times: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<f64>>,
}

impl ExperimentSection {
    fn is_empty(&self) -> bool {
        self.kind.is_none()
            && self.pairs.is_none()
            && self.horizons.is_none()
            && self.sample_times.is_none()
            && self.window.is_none()
            && self.decay_samples.is_none()
            && self.ladder.is_none()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boost: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directory: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checkpoint_every: Option<usize>,
}

impl OutputSection {
    fn is_empty(&self) -> bool {
        self.directory.is_none() && self.checkpoint_every.is_none()
    }
}

/// Axis lists for the sweep command. The cross product is enumerated in the
/// fixed axis order p, gamma, horizon, n, dt (earlier axes vary slowest), so
/// run numbering and CSV row order are stable.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<Vec<f64>>,
}

impl SweepSection {
    /// Expands the cross product into derived configs (sweep section removed)
    /// paired with the five axis values in order, `None` = not swept.
    pub fn expand(&self, base: &RunConfig) -> Result<Vec<(RunConfig, SweepPoint)>> {
        for (name, empty) in [
            ("p", self.p.as_ref().is_some_and(|v| v.is_empty())),
            ("gamma", self.gamma.as_ref().is_some_and(|v| v.is_empty())),
            ("horizon", self.horizon.as_ref().is_some_and(|v| v.is_empty())),
            ("n", self.n.as_ref().is_some_and(|v| v.is_empty())),
            ("dt", self.dt.as_ref().is_some_and(|v| v.is_empty())),
        ] {
            if empty {
                return Err(Error::Config(format!("sweep.{name} is an empty list")));
            }
        }
        if self.p.is_some() && base.equation.kind != "nls" {
            return Err(Error::Config(
                "sweep.p requires equation.kind = \"nls\"".into(),
            ));
        }
        if self.gamma.is_some() && base.equation.kind != "hartree" {
            return Err(Error::Config(
                "sweep.gamma requires equation.kind = \"hartree\"".into(),
            ));
        }
        let ps: Vec<Option<f64>> = option_axis(&self.p);
        let gammas: Vec<Option<f64>> = option_axis(&self.gamma);
        let horizons: Vec<Option<f64>> = option_axis(&self.horizon);
        let ns: Vec<Option<usize>> = option_axis(&self.n);
        let dts: Vec<Option<f64>> = option_axis(&self.dt);
        let mut out = Vec::new();
        for &p in &ps {
            for &gamma in &gammas {
                for &horizon in &horizons {
                    for &n in &ns {
                        for &dt in &dts {
                            let mut cfg = base.clone();
                            cfg.sweep = None;
                            if let Some(v) = p {
                                cfg.equation.p = Some(v);
                            }
                            if let Some(v) = gamma {
                                cfg.equation.gamma = Some(v);
                            }
                            if let Some(v) = horizon {
                                cfg.solver.horizon = v;
                            }
                            if let Some(v) = n {
                                cfg.grid.n = v;
                            }
                            if let Some(v) = dt {
                                cfg.solver.dt = v;
                            }
                            out.push((cfg, SweepPoint { p, gamma, horizon, n, dt }));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The axis values a single sweep run was given (`None` = axis not swept).
#[derive(Debug, Clone, Copy)]
pub struct SweepPoint {
    pub p: Option<f64>,
    pub gamma: Option<f64>,
    pub horizon: Option<f64>,
    pub n: Option<usize>,
    pub dt: Option<f64>,
}

fn option_axis<T: Copy>(axis: &Option<Vec<T>>) -> Vec<Option<T>> {
    match axis {
        Some(vals) => vals.iter().copied().map(Some).collect(),
        None => vec![None],
    }
}

/// The experiment a config (or CLI verb) selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Simulate,
    VerifyEstimates,
    WaveOperator,
    DecayProbe,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<ExperimentKind> {
        match s {
            "simulate" => Ok(ExperimentKind::Simulate),
            "verify-estimates" => Ok(ExperimentKind::VerifyEstimates),
            "wave-operator" => Ok(ExperimentKind::WaveOperator),
            "decay-probe" => Ok(ExperimentKind::DecayProbe),
            other => Err(Error::Config(format!(
                "unknown experiment kind '{other}' (expected simulate, \
                 verify-estimates, wave-operator or decay-probe)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::VerifyEstimates => "verify-estimates",
            ExperimentKind::WaveOperator => "wave-operator",
            ExperimentKind::DecayProbe => "decay-probe",
        }
    }
}

/// Parses and validates a config document. Parse errors carry the TOML
/// line/column; semantic errors name the offending field.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg = parse_config_unvalidated(text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Parses without semantic validation. Drivers that apply command-line
/// overrides (seed, strict boundary, checkpoint cadence) use this and
/// validate the *effective* config, so that e.g. `--seed` can satisfy the
/// verify-estimates seed requirement.
pub fn parse_config_unvalidated(text: &str) -> Result<RunConfig> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

impl RunConfig {
    /// Builds the equation, applying the `kind`/exponent consistency rules.
    pub fn equation(&self) -> Result<Equation> {
        let eq = match self.equation.kind.as_str() {
            "linear" => {
                if self.equation.p.is_some() || self.equation.gamma.is_some() {
                    return Err(Error::Config(
                        "equation.p / equation.gamma are meaningless for the linear flow".into(),
                    ));
                }
                Equation::Linear
            }
            "nls" => {
                if self.equation.gamma.is_some() {
                    return Err(Error::Config(
                        "equation.gamma is meaningless for nls (use p)".into(),
                    ));
                }
                let p = self.equation.p.ok_or_else(|| {
                    Error::Config("equation.p is required for kind = \"nls\"".into())
                })?;
                Equation::Nls { p }
            }
            "hartree" => {
                if self.equation.p.is_some() {
                    return Err(Error::Config(
                        "equation.p is meaningless for hartree (use gamma)".into(),
                    ));
                }
                let gamma = self.equation.gamma.ok_or_else(|| {
                    Error::Config("equation.gamma is required for kind = \"hartree\"".into())
                })?;
                Equation::Hartree { gamma }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown equation.kind '{other}' (expected linear, nls or hartree)"
                )))
            }
        };
        // hard range errors surface on parse; soft warnings surface on run
        eq.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(eq)
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid.n, self.grid.box_length)
            .map_err(|e| Error::Config(format!("grid: {e}")))
    }

    /// Builds the solver config. Dealiasing defaults to on exactly when the
    /// nonlinear product is polynomial of degree >= 3 (NLS with p >= 3);
    /// gentler nonlinearities alias negligibly and keep the full spectrum.
    pub fn solver(&self, eq: &Equation) -> Result<SolverConfig> {
        let t_start = self.solver.t_start.unwrap_or(0.0);
        if !self.solver.horizon.is_finite() || self.solver.horizon <= 0.0 {
            return Err(Error::Config(format!(
                "solver.horizon must be positive, got {}",
                self.solver.horizon
            )));
        }
        let mut cfg = SolverConfig::new(self.solver.dt, t_start, t_start + self.solver.horizon);
        cfg.dealias = self
            .solver
            .dealias
            .unwrap_or(matches!(*eq, Equation::Nls { p } if p >= 3.0));
        if let Some(every) = self.solver.record_every {
            cfg.record_every = every;
        }
        cfg.snapshot_every = self.solver.snapshot_every;
        cfg.strict_boundary = self.solver.strict_boundary.unwrap_or(false);
        cfg.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Materializes the initial state on the configured grid.
    pub fn initial_state(&self) -> Result<Field> {
        let grid = self.grid()?;
        let p = &self.profile;
        let require = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Config(format!("profile.{name} is required for {}", p.kind)))
        };
        let forbid = |present: bool, name: &str| -> Result<()> {
            if present {
                Err(Error::Config(format!(
                    "profile.{name} is meaningless for kind = \"{}\"",
                    p.kind
                )))
            } else {
                Ok(())
            }
        };
        match p.kind.as_str() {
            "gaussian" => {
                forbid(p.mode.is_some(), "mode")?;
                forbid(p.radius.is_some(), "radius")?;
                forbid(p.path.is_some(), "path")?;
                profile::gaussian(
                    grid,
                    require(p.amplitude, "amplitude")?,
                    require(p.width, "width")?,
                    p.boost.unwrap_or([0.0, 0.0]),
                )
                .map_err(|e| Error::Config(e.to_string()))
            }
            "plane-wave" => {
                forbid(p.width.is_some(), "width")?;
                forbid(p.boost.is_some(), "boost")?;
                forbid(p.radius.is_some(), "radius")?;
                forbid(p.path.is_some(), "path")?;
                let mode = p.mode.ok_or_else(|| {
                    Error::Config("profile.mode is required for plane-wave".into())
                })?;
                profile::plane_wave(grid, require(p.amplitude, "amplitude")?, mode)
                    .map_err(|e| Error::Config(e.to_string()))
            }
            "bump" => {
                forbid(p.width.is_some(), "width")?;
                forbid(p.boost.is_some(), "boost")?;
                forbid(p.mode.is_some(), "mode")?;
                forbid(p.path.is_some(), "path")?;
                profile::bump(
                    grid,
                    require(p.amplitude, "amplitude")?,
                    require(p.radius, "radius")?,
                )
                .map_err(|e| Error::Config(e.to_string()))
            }
            "file" => {
                forbid(p.amplitude.is_some(), "amplitude")?;
                forbid(p.width.is_some(), "width")?;
                forbid(p.boost.is_some(), "boost")?;
                forbid(p.mode.is_some(), "mode")?;
                forbid(p.radius.is_some(), "radius")?;
                let path = p.path.as_ref().ok_or_else(|| {
                    Error::Config("profile.path is required for kind = \"file\"".into())
                })?;
                let (field, _, _) = checkpoint::read_checkpoint(Path::new(path))?;
                if field.grid() != grid {
                    return Err(Error::Config(format!(
                        "checkpoint grid ({} x {}, L = {}) does not match the configured grid",
                        field.grid().n(),
                        field.grid().n(),
                        field.grid().box_length()
                    )));
                }
                Ok(field)
            }
            other => Err(Error::Config(format!(
                "unknown profile.kind '{other}' (expected gaussian, plane-wave, bump or file)"
            ))),
        }
    }

    /// The experiment the config selects, if stated.
    pub fn experiment_kind(&self) -> Result<Option<ExperimentKind>> {
        self.experiment
            .kind
            .as_deref()
            .map(ExperimentKind::parse)
            .transpose()
    }

    /// Full semantic validation (everything beyond TOML syntax).
    pub fn validate(&self) -> Result<()> {
        let eq = self.equation()?;
        self.grid()?;
        let solver = self.solver(&eq)?;
        // profile parameter validation without paying for file loads
        if self.profile.kind != "file" {
            self.initial_state()?;
        } else if self.profile.path.is_none() {
            return Err(Error::Config(
                "profile.path is required for kind = \"file\"".into(),
            ));
        }
        let kind = self.experiment_kind()?;
        if let Some(pairs) = &self.experiment.pairs {
            for &[q, r] in pairs {
                admissible_pair(q, r).map_err(|e| Error::Config(format!("experiment.pairs: {e}")))?;
            }
        }
        if let Some(horizons) = &self.experiment.horizons {
            if horizons.is_empty() {
                return Err(Error::Config("experiment.horizons is empty".into()));
            }
            for w in horizons.windows(2) {
                if !(w[0] < w[1]) {
                    return Err(Error::Config(
                        "experiment.horizons must be strictly increasing".into(),
                    ));
                }
            }
            if horizons[0] <= 0.0 || !horizons.iter().all(|h| h.is_finite()) {
                return Err(Error::Config(
                    "experiment.horizons must be positive and finite".into(),
                ));
            }
        }
        if let Some([a, b]) = self.experiment.window {
            if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b) {
                return Err(Error::Config(format!(
                    "experiment.window must satisfy 0 < start < end, got [{a}, {b}]"
                )));
            }
        }
        if let Some(ladder) = &self.experiment.ladder {
            if ladder.len() < 2 {
                return Err(Error::Config(
                    "experiment.ladder needs at least two window starts".into(),
                ));
            }
            for w in ladder.windows(2) {
                if !(w[0] < w[1]) {
                    return Err(Error::Config(
                        "experiment.ladder must be strictly increasing".into(),
                    ));
                }
            }
            if ladder[0] <= 0.0 {
                return Err(Error::Config("experiment.ladder starts must be positive".into()));
            }
        }
        if kind == Some(ExperimentKind::VerifyEstimates) && self.seed.is_none() {
            return Err(Error::Config(
                "verify-estimates runs randomized checkers and requires a seed".into(),
            ));
        }
        if let Some(sweep) = &self.sweep {
            sweep.expand(self)?;
        }
        if let Some(every) = self.output.checkpoint_every {
            if every == 0 {
                return Err(Error::Config(
                    "output.checkpoint_every must be at least 1".into(),
                ));
            }
            let record = solver.record_every;
            if every % record != 0 {
                return Err(Error::Config(format!(
                    "output.checkpoint_every ({every}) must be a multiple of \
                     solver.record_every ({record}): checkpoints are taken at record points"
                )));
            }
        }
        Ok(())
    }
}
