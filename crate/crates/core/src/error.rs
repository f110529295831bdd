use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("ground set mismatch: {0}")]
    GroundMismatch(String),

    #[error("precondition violated: {left} is not contained in {right}")]
    Containment { left: String, right: String },

    #[error("invalid network: {0}")]
    Network(String),

    #[error("no finite cut separates the source from sink {0}")]
    NoFiniteCut(usize),

    #[error("arc set does not separate the source from sink {sink}")]
    NotACut { sink: usize },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("region is unbounded along ray ({0}, {1})")]
    Unbounded(String, String),

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("cannot parse rational `{0}`")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::ParameterDomain(msg.into())
}
