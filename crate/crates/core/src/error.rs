//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong when building inputs or applying a solver
/// outside its domain. `NoSolution` outcomes are not errors; operations that
/// can legitimately find nothing return `Option` instead.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("level spacings must be positive and finite, got omega21 = {omega21}, omega32 = {omega32}")]
    InvalidSpectrum { omega21: f64, omega32: f64 },

    #[error("populations must be nonnegative and sum to 1 within {tol}, got ({r1}, {r2}, {r3})")]
    InvalidTriad { r1: f64, r2: f64, r3: f64, tol: f64 },

    #[error("time must be nonnegative and finite, got {t}")]
    InvalidTime { t: f64 },

    #[error("omega_{pair} * tau = {multiple} pi is a boundary angle; the generic solver does not apply there")]
    BoundaryAngle { pair: &'static str, multiple: i64 },

    #[error("cos(omega * tau) = 1: all phasors realign and no equally spaced solution exists")]
    DegeneratePeriod,

    #[error("single populated level: the state is stationary and never evolves")]
    StationaryState,

    #[error("free edge parameter must lie strictly inside (0, 1/2), got {r}")]
    EdgeParameterOutOfRange { r: f64 },

    #[error("ratio must be positive and finite, got {value}")]
    InvalidRatio { value: f64 },

    #[error("scan step {step} is coarser than the bound {bound} required for omega31 = {omega31}")]
    ScanStepTooCoarse { step: f64, bound: f64, omega31: f64 },

    #[error("invalid search configuration: {reason}")]
    InvalidConfig { reason: String },

    #[error("resolution must be at least 1")]
    ZeroResolution,
}
