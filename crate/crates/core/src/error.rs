use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("permutation length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("k = {k} is outside the supported range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("pattern list must not be empty")]
    EmptyPatterns,

    #[error("pattern of length {pattern} is longer than k = {k}")]
    PatternTooLong { pattern: usize, k: usize },

    #[error("permaspin set is empty")]
    EmptySet,

    #[error("configuration has {config} spins but the graph has {graph} vertices")]
    SizeMismatch { config: usize, graph: usize },

    #[error("spin {0} is not a member of the permaspin set")]
    SpinNotInSet(String),

    #[error("enumeration of {requested} states exceeds the cap of {cap}")]
    CapExceeded { requested: f64, cap: u64 },

    #[error("statistic {0} is not invariant under inversion; the transfer matrix would be asymmetric")]
    NonSymmetricStatistic(&'static str),

    #[error("matrix is not symmetric (max deviation {0:e})")]
    AsymmetricMatrix(f64),

    #[error("operation requires a numeric transfer matrix")]
    SymbolicMatrix,

    #[error("zero-field formula called with H = {0}")]
    NonZeroField(f64),

    #[error("largest eigenvalue {0} is not positive")]
    NonPositiveEigenvalue(f64),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
