use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("insufficient time coverage: {0}")]
    TimeCoverage(String),
    #[error("smoothing exponent out of range: {0}")]
    SigmaRange(String),
    #[error("kernel evaluation: {0}")]
    Kernel(String),
    #[error("fit: {0}")]
    Fit(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("region query: {0}")]
    Region(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
