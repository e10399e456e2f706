use thiserror::Error;

/// Errors raised by the estimation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("horizon unsatisfiable: {0}")]
    Unsatisfiable(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid record {record}: {message}")]
    Validation { record: String, message: String },

    #[error("trend fit failed: {0}")]
    Fit(String),

    #[error("key break failed: {0}")]
    Break(String),

    #[error("no nontrivial factor: {0}")]
    NoFactor(String),

    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
