use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain an operation is defined on.
    #[error("domain violation: {0}")]
    Domain(String),
    /// A size or precision cap was exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    /// Malformed text input. `line` is 1-based; `token` is the 1-based
    /// position of the offending token on that line, when known.
    #[error("parse error at line {line}{}: {msg}", token.map(|t| format!(", token {t}")).unwrap_or_default())]
    Parse {
        line: usize,
        token: Option<usize>,
        msg: String,
    },
    /// A mathematical guarantee did not hold. Indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn resource(msg: impl Into<String>) -> Error {
    Error::ResourceLimit(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
