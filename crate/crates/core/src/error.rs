use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the symbolic kernel and the analysis operations built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A configured size bound (exponent, ansatz size) was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// An input violated an operation's precondition.
    #[error("invalid input: {0}")]
    Validation(String),
    /// The input lies outside the class of objects the operation handles exactly.
    #[error("not supported: {0}")]
    NotSupported(String),
    /// A set of vector fields or algebra vectors is not closed under the bracket.
    #[error("not closed under the bracket: {0}")]
    Closure(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::NotSupported(msg.into())
    }
}

/// A diagnostic from the `.pde` reader, located at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub hint: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.hint.is_empty() {
            write!(f, " (hint: {})", self.hint)?;
        }
        Ok(())
    }
}
