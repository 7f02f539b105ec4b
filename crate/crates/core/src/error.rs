use thiserror::Error;

use crate::circuit_analysis::NotCircuitReason;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Parameters outside the mathematical domain (n = 0, d = 0, odd degree, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("level {level} outside the admissible range {min}..={max}")]
    LevelOutOfRange {
        level: usize,
        min: usize,
        max: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("linear system has no solution")]
    Inconsistent,

    #[error("not a circuit form: {0}")]
    NotCircuit(NotCircuitReason),

    #[error("form is not positive semidefinite")]
    NotPsd,

    #[error("form carries no nonnegativity evidence: {0}")]
    NoPsdEvidence(String),

    /// Caller assertions contradict what can be derived from the form.
    #[error("inconsistent assertion: {0}")]
    Assertion(String),

    #[error("the case (n+1, 2d) = ({vars}, {degree}) is a Hilbert case")]
    HilbertCase { vars: usize, degree: usize },

    /// A construction produced data violating one of its own invariants.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
