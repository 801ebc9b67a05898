use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("not a left quasigroup: row {row} is not a permutation")]
    NotLeftQuasigroup { row: usize },
    #[error("{what} exceeds the cap of {limit}")]
    CapExceeded { what: &'static str, limit: usize },
    #[error("partition is not a congruence")]
    NotACongruence,
    #[error("congruences are not ordered as required")]
    OrderViolation,
    #[error("induced map on blocks is not well defined")]
    NotWellDefined,
    #[error("subgroup is not normal in the left multiplication group")]
    NotNormal,
    #[error("extension data invalid: {0}")]
    SpecViolation(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
