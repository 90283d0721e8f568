use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree {0} outside the supported range")]
    DegreeOutOfRange(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),
    #[error("letter {letter} out of range for degree {n}")]
    LetterOutOfRange { letter: usize, n: usize },
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{0} is not a supported prime modulus (2 <= p <= 31)")]
    NotPrime(u32),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("enumeration of {requested} objects exceeds budget {budget}")]
    EnumerationBudgetExceeded { requested: u128, budget: u64 },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("resolution mismatch at {0}")]
    ResolutionMismatch(String),
    #[error("word {0} is not reduced")]
    NotReduced(String),
    #[error("point does not satisfy the defining conditions")]
    NotAMember,
    #[error("defining flags are not transverse")]
    FlagsNotTransverse,
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("interpolated coefficients are not integral")]
    NonIntegralCoefficients,
    #[error("partition {0} is not admissible")]
    NotAdmissible(String),
    #[error("value out of bounds: {0}")]
    OutOfBounds(String),
    #[error("family specializes to a singular matrix at s = {0}")]
    SingularFiber(u32),
    #[error("no family found: {0}")]
    NotFound(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
