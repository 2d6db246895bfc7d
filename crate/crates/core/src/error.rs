use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field exponent must be positive, got {0}")]
    BadExponent(u32),
    #[error("field order {p}^{k} exceeds the limit {limit}")]
    FieldTooLarge { p: u32, k: u32, limit: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{d} does not divide q - 1 = {order}")]
    BadSubgroupOrder { d: u32, order: u32 },
    #[error("matrix is singular")]
    Singular,
    #[error("the zero vector has no line and is not a point of the action")]
    ZeroVector,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("operation needs a nonempty set")]
    EmptySet,
    #[error("set must contain the identity")]
    MissingIdentity,
    #[error("set is not intersecting")]
    NotIntersecting,
    #[error("expected a set of size {expected}, got {actual}")]
    WrongSize { expected: usize, actual: usize },
    #[error("{what} has {size} vertices, above the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("time cap exceeded")]
    Interrupted,
}

pub type Result<T> = std::result::Result<T, Error>;
