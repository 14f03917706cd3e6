//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by state validation, measure evaluation, channel handling,
/// and the conversion routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "matrix is not Hermitian (max |m_ij - conj(m_ji)| = {deviation:.3e}, bound {bound:.3e})"
    )]
    NotHermitian { deviation: f64, bound: f64 },

    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:.3e}, bound {bound:.3e})")]
    NotPSD { min_eigenvalue: f64, bound: f64 },

    #[error("trace is not 1 (got {trace:.17e}, bound {bound:.3e})")]
    TraceNotOne { trace: f64, bound: f64 },

    #[error("state vector is not normalized (norm {norm:.17e})")]
    NotNormalized { norm: f64 },

    #[error("invalid dimension {dim}: {reason}")]
    InvalidDim { dim: usize, reason: &'static str },

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("invalid alpha {alpha}: {reason}")]
    InvalidAlpha { alpha: f64, reason: &'static str },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("roof function failed its screen: {reason}")]
    InvalidFunction { reason: String },

    #[error("ensemble size {size} is smaller than rank {rank}")]
    EnsembleTooSmall { size: usize, rank: usize },

    #[error("Kraus set is not free: {diagnostics}")]
    NotFree { diagnostics: String },

    #[error("unknown channel recipe `{0}`")]
    InvalidRecipe(String),

    #[error(
        "free completion undefined: |f> is not an eigenvector of sum K'K (residual {residual:.3e})"
    )]
    FreeCompletionUndefined { residual: f64 },

    #[error("conversion formulas are defined for dimension 2 only (got {0})")]
    DimUnsupported(usize),

    #[error(
        "target is the free state f (texture {texture:.3e}); conversion probability undefined"
    )]
    TargetIsFreeState { texture: f64 },

    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),

    #[error("bloch coefficient lengths ({x}, {y}, {z}) do not match dimension {dim}")]
    BlochShape {
        x: usize,
        y: usize,
        z: usize,
        dim: usize,
    },

    #[error("could not parse input: {0}")]
    Parse(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
