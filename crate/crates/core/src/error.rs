use thiserror::Error;

/// Contract violations reported by the algebra, combinatorics and series layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("variable count must be at least 1")]
    NoVariables,

    #[error("multi-index has length {got}, expected {expected}")]
    IndexLength { expected: usize, got: usize },

    #[error("operator is not first-order")]
    NotFirstOrder,

    #[error("subset must be non-empty")]
    EmptySubset,

    #[error("subset element {element} outside 1..={m} or repeated")]
    BadSubset { element: usize, m: usize },

    #[error("not a set partition of [{m}]: {reason}")]
    NotAPartition { m: usize, reason: String },

    #[error("multiplicities do not form a partition of {m} (weighted sum {sum})")]
    InconsistentMultiplicities { m: usize, sum: usize },

    #[error("m = {m} exceeds the enumeration cap {cap}")]
    CapExceeded { m: usize, cap: usize },

    #[error("series constant term must be {expected}")]
    ConstantTerm { expected: &'static str },

    #[error("a1 must be nonzero")]
    ZeroLinearTerm,

    #[error("series order {have} is too small, need at least {need}")]
    InsufficientOrder { need: usize, have: usize },

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
