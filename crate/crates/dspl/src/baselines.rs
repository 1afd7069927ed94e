//! Pinned experiment configurations and calibrated pass thresholds.
//!
//! The estimate checkers compare measured ratios against *ceilings*: frozen
//! upper bounds obtained by running the pinned configurations below, taking
//! the observed value and multiplying by 1.25. A regression that pushes a
//! ratio past its ceiling therefore indicates a real change in behaviour,
//! not noise — the underlying quantities are deterministic, so reruns
//! reproduce them to the last bit.
//!
//! Regenerating after an intentional change:
//!
//! ```text
//! cargo run --release --example calibrate
//! ```
//!
//! prints every measured quantity next to the pinned constant; update the
//! constants here with `measured * 1.25` (ceilings), `measured * 0.5`
//! (floors), or the printed band suggestion (slope bands), and record why in
//! the commit message.

use crate::config::{parse_config, RunConfig};
use crate::error::Result;

/// Samples per randomized positivity sweep in `verify-estimates` runs.
/// (The acceptance suite independently runs 10^6.)
pub const VERIFY_POSITIVITY_SAMPLES: usize = 200_000;

/// Ceiling for the correlation (two-point space-time) estimate ratio
///   ||D^{1/2}(|u|^2)||_{L^2_{t,x}} / (sup_t |u|_{H^{1/2}-dot} * sup_t |u|_{L^2}).
/// Measured 0.2530 (NLS p=2.5) and 0.1094 (Hartree gamma=1.5) on the pinned
/// estimate configs.
pub const CORRELATION_CEILING: f64 = 0.2530 * 1.25;

/// Ceiling for the interpolated space-time bound ratio
///   ||u||_{L^q_t L^r_x} / (M^{theta1} * C^{theta2}) on the pinned pairs.
/// Measured 0.4341 ((4,8), NLS), 0.5438 ((6,4), NLS), 0.2805 ((4,8),
/// Hartree), 0.4120 ((6,4), Hartree).
pub const INTERPOLATED_CEILING: f64 = 0.5438 * 1.25;

/// Ceiling for the convolution-inequality ratio
///   ||(|x|^{-gamma} * |u|^2)||_{L^2} / ||u||^2_{L^{4/(3-gamma)}}.
/// Measured 8.7647 on the pinned Hartree profile (gamma = 1.5; the sharp
/// plane constant for this exponent pair is of the same order).
pub const HLS_CEILING: f64 = 8.7647 * 1.25;

/// Band for the fitted free-flow sup-norm decay exponent on the pinned
/// window (the infinite-plane exponent is -1).
pub const SUP_DECAY_SLOPE_BAND: [f64; 2] = [-1.05, -0.95];

/// Band for the fitted free-flow L^4 decay exponent (plane exponent -1/2).
pub const L4_DECAY_SLOPE_BAND: [f64; 2] = [-0.55, -0.45];

/// Floor for the fitted dyadic-window decay rate beta of the pairing
/// integrals |int_s^{2s} <N(u(t)), U(t) psi> dt| ~ s^{-beta}.
/// Measured beta = 0.3810 (NLS p=2.5) and 0.4514 (Hartree gamma=1.5) on the
/// pinned ladder (early windows, so shallower than the asymptotic rate).
pub const LADDER_BETA_FLOOR: f64 = 0.19;

/// Backward-then-forward reconstruction error allowed on the standard test.
pub const ROUND_TRIP_TOL: f64 = 1e-8;

/// All scheme distances in the linear control experiment must vanish to
/// round-off accumulated over the step count.
pub const LINEAR_CONTROL_TOL: f64 = 1e-11;

/// Pointwise tolerance for the linear Gaussian closed-form comparison.
pub const LINEAR_POINTWISE_TOL: f64 = 1e-8;

/// Conservation thresholds on the pinned conservation runs.
pub const MASS_DRIFT_TOL: f64 = 1e-10;
pub const MOMENTUM_DRIFT_TOL: f64 = 1e-9;
/// Halving dt must shrink the energy drift at least this much (second-order
/// splitting gives 4 in the dt^2 regime).
pub const ENERGY_DRIFT_RATIO_MIN: f64 = 3.5;

/// Conservation suite (mass/energy/momentum drift): boosted Gaussian on a
/// moderate box, long horizon. `dt` is halved in code for the order check.
///
/// The amplitude is 0.5 rather than 1.0 because of a genuine spatial
/// discretization limit: a fractional power `|u|^{p-1}` has Hölder cusps at
/// the field's nodal points (formed by self-interference once the packet
/// wraps), and the aliasing of those cusps injects a momentum error that is
/// independent of dt and of dealiasing — it is the time integral of a
/// grid-resolution functional. At amplitude 1.0 it measures 2.3e-9 on this
/// grid (vs 2.5e-12 for the smooth p = 3 nonlinearity); it scales roughly
/// like A^{p+1}, and at 0.5 it sits twenty-fold below the pinned momentum
/// tolerance while the dynamics stays genuinely nonlinear (the energy-drift
/// order check still sees the full splitting commutator).
pub fn conservation_toml(kind: &str) -> String {
    let equation = equation_block(kind);
    format!(
        r#"{equation}
[grid]
n = 256
box_length = 40.0

[solver]
dt = 1e-3
horizon = 10.0
record_every = 100

[profile]
kind = "gaussian"
amplitude = 0.5
width = 1.0
boost = [0.5, 0.3]
"#
    )
}

/// Linear Gaussian closed-form comparison: box large enough that the wrapped
/// images of the dispersed Gaussian stay below 1e-11 through t = 2.
pub const LINEAR_GAUSSIAN_TOML: &str = r#"
[equation]
kind = "linear"

[grid]
n = 256
box_length = 60.0

[solver]
dt = 1e-2
horizon = 2.0
record_every = 50

[profile]
kind = "gaussian"
amplitude = 1.0
width = 1.0
"#;

/// Plane-wave dispersion check: a single Fourier mode, where both split-step
/// sub-flows act by exact phases.
pub const PLANE_WAVE_TOML: &str = r#"
[equation]
kind = "nls"
p = 2.5

[grid]
n = 64
box_length = 20.0

[solver]
dt = 1e-3
horizon = 1.0
record_every = 1000

[profile]
kind = "plane-wave"
amplitude = 0.8
mode = [2, 1]
"#;

/// Estimate-verification suite: wide box so dispersion dominates over the
/// horizon, moderate-width Gaussian data.
pub fn estimates_toml(kind: &str) -> String {
    let equation = equation_block(kind);
    format!(
        r#"seed = 42
{equation}
[grid]
n = 256
box_length = 160.0

[solver]
dt = 1e-3
horizon = 10.0
record_every = 20

[experiment]
kind = "verify-estimates"
pairs = [[4.0, 8.0], [6.0, 4.0]]

[profile]
kind = "gaussian"
amplitude = 1.0
width = 1.5
"#
    )
}

/// Decay probe: free-flow decay exponents fitted on [2, 12] (kept short of
/// the time where the dispersed width reaches the box scale), and pairing
/// integrals over the dyadic ladder [0.5, 1, 2, 4] within horizon 8.
pub fn decay_toml(kind: &str) -> String {
    let equation = equation_block(kind);
    format!(
        r#"{equation}
[grid]
n = 256
box_length = 160.0

[solver]
dt = 2e-3
horizon = 8.0
record_every = 25

[experiment]
kind = "decay-probe"
window = [2.0, 12.0]
decay_samples = 24
ladder = [0.5, 1.0, 2.0, 4.0]

[profile]
kind = "gaussian"
amplitude = 1.0
width = 1.0
"#
    )
}

/// Wave-operator experiment: small-amplitude wide Gaussian scattering datum
/// (H^1 norm <= 1), dyadic horizon ladder. The box satisfies L >= 8 sqrt(T)
/// for every horizon, keeping the dispersing free solution inside; mild
/// boundary-mass warnings at T = 32 are expected and reported.
pub fn wave_operator_toml(kind: &str) -> String {
    let equation = equation_block(kind);
    format!(
        r#"{equation}
[grid]
n = 256
box_length = 160.0

[solver]
dt = 4e-3
horizon = 32.0
record_every = 250

[experiment]
kind = "wave-operator"
horizons = [4.0, 8.0, 16.0, 32.0]
sample_times = [4.0, 8.0, 16.0]

[profile]
kind = "gaussian"
amplitude = 0.25
width = 2.0
"#
    )
}

/// Small, fast configuration used for determinism and file-format checks.
pub const SMOKE_TOML: &str = r#"
[equation]
kind = "nls"
p = 2.5

[grid]
n = 64
box_length = 20.0

[solver]
dt = 1e-2
horizon = 0.5
record_every = 5

[profile]
kind = "gaussian"
amplitude = 1.0
width = 1.0
boost = [0.3, 0.2]
"#;

fn equation_block(kind: &str) -> String {
    match kind {
        "nls" => "[equation]\nkind = \"nls\"\np = 2.5\n".to_string(),
        "hartree" => "[equation]\nkind = \"hartree\"\ngamma = 1.5\n".to_string(),
        "linear" => "[equation]\nkind = \"linear\"\n".to_string(),
        other => panic!("no pinned equation block for kind '{other}'"),
    }
}

/// Parses one of the pinned documents above.
pub fn pinned(text: &str) -> Result<RunConfig> {
    parse_config(text)
}
