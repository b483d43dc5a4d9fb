//! Orthogonality times of three-level pure states.
//!
//! A pure qutrit state with populations `(r1, r2, r3)` over nondegenerate
//! energy levels evolves freely, and its overlap with the initial state is a
//! sum of three phasors. This crate answers, exactly where closed forms exist
//! and numerically where they do not: when does that overlap vanish, which
//! population triads admit a vanishing overlap at all, and how close the
//! orthogonality time comes to the quantum speed limit.
//!
//! Everything is phrased in terms of the two level spacings `omega21`,
//! `omega32` (with `hbar = 1`) and the spacing ratio `Omega = omega32 /
//! omega21`. Relative phases of the initial superposition never enter any
//! observable computed here.

pub mod error;
mod exec;
pub mod families;
pub mod oracle;
pub mod qsl;
pub mod regions;
pub mod state;

pub use error::Error;
pub use state::{
    is_orthogonal_at, survival_amplitude, survival_probability, Amplitude, LevelPair,
    QutritState, Spectrum, Triad,
};

/// Drift allowed on the population sum when validating a triad.
pub const TRIAD_SUM_TOL: f64 = 1e-12;

/// Default magnitude below which the survival amplitude counts as zero.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Default tolerance on `|sin(omega_ij * tau)|` separating the generic
/// (all angles away from multiples of pi) regime from the boundary one.
pub const ANGLE_TOL: f64 = 1e-9;

/// A population below this is treated as an exact zero when deciding which
/// levels take part in the dynamics.
pub const ZERO_POPULATION_TOL: f64 = 1e-12;

/// Half width of the `alpha = 1` band used when naming the binding bound.
pub const EQUAL_BAND_TOL: f64 = 1e-9;
