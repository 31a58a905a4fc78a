use thiserror::Error;

/// Errors shared by every part of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A value violates a type invariant (bad generator set, malformed clause, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The operation is undefined for this input, e.g. an infinite gap set.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The request would exceed a configured resource budget.
    #[error("resource budget exceeded: {what} needs {requested}, limit is {limit}")]
    Budget {
        what: &'static str,
        requested: String,
        limit: String,
    },

    /// A randomized or combinatorial construction could not be completed.
    #[error("construction failed: {0}")]
    Construction(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn budget(
        what: &'static str,
        requested: impl ToString,
        limit: impl ToString,
    ) -> Self {
        Error::Budget {
            what,
            requested: requested.to_string(),
            limit: limit.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
