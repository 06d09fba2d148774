use thiserror::Error;

/// Errors raised by the algebraic core.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid groupoid: {0}")]
    InvalidGroupoid(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("not a probability groupoid: cardinality is {0}, expected 1")]
    NotProbability(String),

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("resource budget exceeded: {what} needs {needed}, limit is {limit}")]
    Resource {
        what: String,
        needed: String,
        limit: String,
    },
}

impl Error {
    pub(crate) fn resource(what: impl Into<String>, needed: impl ToString, limit: impl ToString) -> Self {
        Error::Resource {
            what: what.into(),
            needed: needed.to_string(),
            limit: limit.to_string(),
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
