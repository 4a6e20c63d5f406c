use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cycle order must be at least 1, got {0}")]
    InvalidOrder(i64),

    #[error("residue {residue} at position {index} is out of range for modulus {modulus}")]
    ResidueOutOfRange {
        index: usize,
        residue: u64,
        modulus: u64,
    },

    #[error("element has {got} residues but the group has {expected} cycle factors")]
    ElementArity { expected: usize, got: usize },

    #[error("enumeration cap exceeded: {size} elements requested, cap is {cap}")]
    CapExceeded { size: u128, cap: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entry {0} is not unimodular")]
    NotUnimodular(String),

    #[error("entry at ({row}, {col}) is not real +1/-1")]
    NonRealEntry { row: usize, col: usize },

    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),

    #[error("matrix is not Hadamard: {0}")]
    NotHadamard(String),

    #[error("matrix is not exact: {0}")]
    NotExact(String),

    #[error("non-finite entry in coefficient matrix")]
    NonFinite,

    #[error(
        "ambiguous rank: rank {rank} has gap ratio {gap_ratio:e} below threshold {threshold:e}"
    )]
    AmbiguousRank {
        rank: usize,
        gap_ratio: f64,
        threshold: f64,
        singular_values: Vec<f64>,
    },

    #[error("dephased defect paths disagree: d(H)-2N+1 = {via_relation}, restricted nullity = {via_restriction}")]
    PathDisagreement {
        via_relation: i64,
        via_restriction: i64,
    },

    #[error("residual {residual:e} exceeds tolerance {tolerance:e}: {context}")]
    ResidualExceeded {
        residual: f64,
        tolerance: f64,
        context: String,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("group action is not regular: {0}")]
    NotRegular(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
