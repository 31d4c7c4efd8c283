use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("N = {0} is even; only odd N is supported")]
    EvenN(u32),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("incomparable: partitions of {0} and {1}")]
    Incomparable(u32, u32),
    #[error("{0} lies outside N_1^3")]
    OutsideOrder3(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("empty fiber: {0}")]
    EmptyFiber(String),
    #[error("no isotropic subspace of that dimension: k = {k}, d = {d}")]
    NoIsotropic { k: u32, d: u32 },
    #[error("Witt type {witt} does not fit a form of dimension {dim}")]
    WittMismatch { witt: &'static str, dim: u32 },
    #[error("negative coefficient in a point-count polynomial")]
    NegativeCoefficient,
    #[error("not a fundamental weight: j = {j} > g = {g}")]
    NotFundamentalWeight { g: u32, j: u32 },
    #[error("inconsistent profile: {0}")]
    InconsistentProfile(String),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("tuple is not regular: {0}")]
    NotRegular(String),
    #[error("repeated branch points")]
    RepeatedBranchPoints,
    #[error("oracle too large: estimated work {estimate} exceeds budget {budget}")]
    OracleTooLarge { estimate: u128, budget: u128 },
    #[error("singular matrix: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
