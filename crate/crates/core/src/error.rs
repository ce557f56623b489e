//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by sample construction, base-function evaluation, the
/// coordinate transform, and the Monte Carlo engines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input value is NaN or infinite.
    #[error("input contains a non-finite value")]
    NonFinite,

    /// A sample is smaller than the operation requires.
    #[error("sample size {got} is below the minimum {min}")]
    SampleTooSmall { min: usize, got: usize },

    /// A sample whose standard deviation vanishes where a positive one is required.
    #[error("degenerate sample: standard deviation is zero")]
    DegenerateSample,

    /// A base function was applied to a point of the wrong length.
    #[error("arity mismatch: base function expects n = {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    /// A point is outside the sorted zero-sum domain of base functions.
    #[error("point outside the ordered zero-sum domain: {0}")]
    DomainViolation(String),

    /// Coordinates fall outside the admissible transform region.
    #[error("coordinates outside the transform region")]
    OutsideRegion,

    /// The transform hits the measure-zero boundary where its last radical vanishes.
    #[error("transform singularity: the trailing radicand vanishes")]
    Singularity,

    /// A quadratic-form coefficient matrix failed the positive-definiteness check.
    #[error("coefficient matrix is not positive definite")]
    NotPositiveDefinite,

    /// An invalid scalar or structural parameter.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A serialized descriptor could not be produced or parsed.
    #[error("descriptor error: {0}")]
    Descriptor(String),

    /// Too little data for the requested test or table.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
