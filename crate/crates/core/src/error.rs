use thiserror::Error;

/// Errors raised by the analysis routines.
///
/// [`Error::InvariantViolation`] is special: it is only produced when a
/// computed object contradicts a proven structural fact (a theorem check
/// failed). Everything else is a data or precondition problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("direction vector must be nonzero")]
    ZeroDirection,

    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u64, right: u64 },

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty set")]
    EmptySet,

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("scalar kind mismatch: {0}")]
    Kind(String),

    #[error("inconsistent mass table: {0}")]
    InconsistentMasses(String),

    #[error("incomplete mass table, missing directions: {missing:?}")]
    IncompleteMasses { missing: Vec<Vec<u64>> },

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("malformed input: {}", .0.join("; "))]
    Schema(Vec<String>),
}

impl Error {
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
