//! 2-D pseudospectral toolkit for defocusing Schrodinger-type equations on a
//! periodic box, together with a verification harness for the interaction
//! Morawetz / correlation estimates, dispersive decay probes and the
//! wave-operator approximation experiment.
//!
//! The crate is organised around six layers:
//!
//! * [`grid`], [`field`], [`fft`], [`spectral`], [`kernel`], [`profile`] —
//!   grids, fields, transforms, fractional derivatives, norms and truncated
//!   singular-kernel convolutions;
//! * [`propagator`] — exact linear flow and Strang split-step integrators
//!   for the linear, NLS and Hartree equations;
//! * [`diagnostics`] — conserved quantities, densities, the two-point
//!   Morawetz action, correlation density and space-time norm accumulators;
//! * [`estimates`] — ratio checks for the correlation estimate, interpolated
//!   space-time bounds, the convolution inequality, kernel positivity and
//!   time-decay probes;
//! * [`wave_operator`] — the backward-from-scattering-data construction and
//!   its Cauchy/convergence reports;
//! * [`config`], [`checkpoint`], [`runner`] — run configuration, binary
//!   state snapshots and the experiment drivers behind the `dspl` binary.
//!
//! Everything is deterministic: integrators and reductions are strictly
//! sequential, randomized checkers take explicit seeds, and rerunning a
//! configuration reproduces output files byte for byte.

pub mod baselines;
pub mod checkpoint;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod estimates;
pub mod fft;
pub mod field;
pub mod grid;
pub mod kernel;
pub mod profile;
pub mod propagator;
pub mod runner;
pub mod spectral;
pub mod wave_operator;

pub use error::{Error, Result};
pub use field::{Field, RealField};
pub use grid::Grid;
