use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Variants fall into two groups: input validation (the caller asked for
/// something that does not exist, e.g. a type AII involution for an
/// unpaired partition) and [`Error::Inconsistency`], which means an
/// algebraic invariant that must hold by construction was violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("type AII needs paired parts (λ1 = λ2, λ3 = λ4, ...): {0}")]
    PairingViolation(String),

    #[error("label sequence has {got} entries but the partition has {expected} rows")]
    PhiLength { expected: usize, got: usize },

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("characteristic polynomial does not split over the rationals")]
    NotSplit,

    #[error("expected a diagonal matrix with integer entries")]
    NotIntegerDiagonal,

    #[error("scaling parameter must be nonzero")]
    ZeroScaling,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// True for errors that indicate a broken invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistency(_))
    }
}
