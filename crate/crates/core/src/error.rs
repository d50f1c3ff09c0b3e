use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invalid quote on {date}: {message}")]
    Validation { date: NaiveDate, message: String },

    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("ruin: margin {margin}% with spread {spread}% gives a per-day loss factor of {loss_factor} (must stay positive)")]
    Ruin {
        spread: f64,
        margin: f64,
        loss_factor: f64,
    },

    #[error("store format error: {0}")]
    Format(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
