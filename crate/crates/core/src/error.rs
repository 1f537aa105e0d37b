use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its valid domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An anomaly mode does not match the network kind (or base model).
    #[error("mode mismatch: {0}")]
    Mode(String),

    /// The computation is well defined but has no meaningful value for this
    /// input (zero marginals, zero scale, empty graph, ...).
    #[error("degenerate computation: {0}")]
    Degenerate(String),

    /// An input broke a structural contract, e.g. an asymmetric matrix.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed file or config contents.
    #[error("malformed input: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, Error::Degenerate(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
