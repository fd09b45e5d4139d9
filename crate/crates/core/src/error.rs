use thiserror::Error;

/// Errors raised by constructors, transforms and the search.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("malformed routing: {0}")]
    MalformedRouting(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported degree {degree} at non-crossing vertex {vertex}")]
    UnsupportedDegree { vertex: String, degree: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
