use thiserror::Error;

/// Errors produced by the library.
///
/// Axiom failures found by [`crate::lie::validate`] are *not* errors; they are
/// reported as data in a [`crate::lie::ValidationReport`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("mixed scalar towers: {0}")]
    ScalarTowerMismatch(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid preset parameters: {0}")]
    InvalidPresetParams(String),

    #[error("dilation factor must be positive")]
    NonPositiveDilation,

    #[error("basis index {index} out of range (must be below {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("step {step} of the word is not horizontal")]
    NonHorizontal { step: usize },

    #[error("bracket word needs {expected} entries (the step), got {found}")]
    BracketLength { expected: usize, found: usize },

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("samples {first} and {second} are incompatible: |f(a)-f(b)| / rho(a,b) = {ratio} > L = {limit}")]
    IncompatibleSamples {
        first: usize,
        second: usize,
        ratio: f64,
        limit: f64,
    },

    #[error("limit did not converge: {0}")]
    NonConvergent(String),

    #[error("unknown field `{0}`")]
    UnknownField(String),

    #[error("field evaluation failed: {0}")]
    Oracle(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
