//! Error type shared across the crate.

use thiserror::Error;

/// Failure modes of the numerical kernels. Diagnostic magnitudes are carried
/// as `f64` regardless of the working scalar type.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max entrywise |A - A^dag| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary (max entrywise |U^dag U - 1| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("density matrix is rank deficient (min eigenvalue = {min_eigenvalue:.3e})")]
    RankDeficient { min_eigenvalue: f64 },

    #[error("path is not closed (endpoint deviation = {deviation:.3e})")]
    NotClosed { deviation: f64 },

    #[error("gapless path: planar map magnitude fell to {min_norm:.3e}")]
    GaplessPath { min_norm: f64 },

    #[error("grid too coarse: angle step of {step:.3} rad between samples {index} and {}", index + 1)]
    GridTooCoarse { step: f64, index: usize },

    #[error("no sign change across the bracket")]
    NoSignChange,

    #[error("{0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
