use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series tail unresolved at truncation {k}: tail bound {tail:.3e} > {tol:.3e}")]
    UnresolvedSeries { k: usize, tail: f64, tol: f64 },

    #[error("symbol evaluated to a non-finite value at z = {z}")]
    EvaluationError { z: Complex64 },

    #[error("phase increment {value:.4} is not within 0.1 of an integer (grid size {m})")]
    NonIntegerWinding { value: f64, m: usize },

    #[error("symbol vanishes on the unit circle: |f| = {magnitude:.3e} near theta = {theta:.6}")]
    ZeroOnCircle { theta: f64, magnitude: f64 },

    #[error("winding number is {nu}, expected 0")]
    NonzeroWinding { nu: i32 },

    #[error("adjacent phase step {step:.4} rad is too close to pi; grid too coarse")]
    PhaseStepTooLarge { step: f64 },

    #[error("coefficient index {index} exceeds resolved window +-{k}")]
    CoefficientRangeExceeded { index: i64, k: usize },

    #[error("matrix numerically singular at elimination step {step}")]
    SingularMatrix { step: usize },

    #[error("band determinant vanishes at n = {n}: |Delta| = {magnitude:.3e}")]
    ZeroBandDeterminant { n: usize, magnitude: f64 },

    #[error("imaginary residue {value:.3e} exceeds {limit:.1e} in a real observable")]
    ImaginaryResidue { value: f64, limit: f64 },

    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}
