//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("non-invertible in managed extension: {0}")]
    NonInvertible(String),

    #[error("negative radicand at q0 = {q0}: {radicand}")]
    NegativeRadicand { q0: String, radicand: String },

    #[error("invalid q0 = {0}: must be positive and different from 1")]
    InvalidEvaluationPoint(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("q-binomial arguments out of range: n = {n}, k = {k}")]
    BinomialRange { n: i64, k: i64 },

    #[error("expansion residual nonzero at cutoff l = {cutoff}: {residual}")]
    ExpansionResidual { cutoff: String, residual: String },

    #[error("element not in the image of the embedding: {0}")]
    NotInImage(String),

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("residual radical coefficient in {context}: {value}")]
    RadicalResidue { context: String, value: String },

    #[error("square root not available for {0}")]
    SqrtUnsupported(String),

    #[error("cocycle arity {arity} does not match chain degree {degree}")]
    ArityMismatch { arity: usize, degree: usize },

    #[error("twist mismatch: {0}")]
    TwistMismatch(String),

    #[error("truncation unstable: {0}")]
    TruncationUnstable(String),

    #[error("ill-conditioned kernel decision: singular value gap [{below}, {above}] around tol {tol}")]
    IllConditioned { below: f64, above: f64, tol: f64 },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("cache format mismatch: {0}")]
    CacheFormat(String),

    #[error("{0}")]
    Other(String),
}
