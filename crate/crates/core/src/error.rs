use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The inputs lie outside the range where the checked statement claims anything.
    #[error("hypothesis range: {0}")]
    HypothesisRange(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("missing table entry: r({a}, {b}) is required")]
    MissingTableEntry { a: u32, b: u32 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
