use std::fmt;

use serde::Serialize;

/// A field evaluation that left the domain of the function, or produced a
/// non-finite value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainError {
    pub message: String,
}

impl DomainError {
    pub fn new(message: impl Into<String>) -> Self {
        DomainError {
            message: message.into(),
        }
    }
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for DomainError {}

/// Syntax error in an expression, located by byte offset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("parse error at byte {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate pair: {0}")]
    Degenerate(String),
    #[error("no bracket: {0}")]
    NoBracket(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
}

impl Error {
    /// Short machine-readable tag, used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Parse(_) => "parse",
            Error::InvalidInput(_) => "invalid_input",
            Error::Degenerate(_) => "degenerate",
            Error::NoBracket(_) => "no_bracket",
            Error::Hypothesis(_) => "hypothesis",
            Error::NonConvergence(_) => "non_convergence",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
