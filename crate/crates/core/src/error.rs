//! Error type shared across the crate.

use thiserror::Error;

/// Errors for rejected inputs and resource limits.
///
/// Data-quality problems in an ontological model (broken normalization,
/// negative weights, ...) are *not* errors; they are reported as
/// [`crate::ontology::Violation`]s by `validate_model`.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state `{label}` is not normalized: |amplitudes|^2 = {norm_sq}")]
    NotNormalized { label: String, norm_sq: f64 },

    #[error("state must have dimension >= 1")]
    EmptyState,

    #[error("unknown {kind} label `{label}`")]
    UnknownLabel { kind: &'static str, label: String },

    #[error("duplicate {kind} label `{label}`")]
    DuplicateLabel { kind: &'static str, label: String },

    #[error("measurement `{label}` is invalid: {reason}")]
    InvalidMeasurement { label: String, reason: String },

    #[error("measurement `{label}` is not projective: {reason}")]
    NotProjective { label: String, reason: String },

    #[error("preparations `{a}` and `{b}` coincide up to phase (|<a|b>| = {overlap})")]
    IndistinctPreparations { a: String, b: String, overlap: f64 },

    #[error("classification needs at least 2 preparations, model has {count}")]
    TooFewPreparations { count: usize },

    #[error("deterministic assignment space has {size} states, exceeding the cap of {cap}")]
    AssignmentSpaceTooLarge { size: u128, cap: u128 },

    #[error("simplex did not terminate within {limit} iterations")]
    IterationLimit { limit: u64 },

    #[error("malformed linear program: {0}")]
    MalformedProgram(String),

    #[error("{0}")]
    Numerics(String),
}

pub type Result<T> = std::result::Result<T, Error>;
