use thiserror::Error;

pub type Result<T> = std::result::Result<T, QwmError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QwmError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid dicycle factorization: {0}")]
    InvalidFactorization(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The coin-shift function breaks the per-target multiset rule, so the
    /// shift operator would not be unitary.
    #[error("coin-shift constraint violated ({rule}) at {} target vertices", vertices.len())]
    ConstraintViolation { rule: String, vertices: Vec<usize> },

    /// An exhaustive search would exceed `limit`, counted in `what`.
    #[error("exhaustive search too large: {size} {what} (limit {limit})")]
    TooLarge { what: &'static str, size: usize, limit: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("window of {window} positions can wrap before the horizon (need at least {required})")]
    WrapRisk { window: usize, required: usize },

    #[error("amplitude off the even sublattice at x={x}, t={t}")]
    OffSublattice { x: i64, t: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("series too short: {0}")]
    SeriesTooShort(String),
}
