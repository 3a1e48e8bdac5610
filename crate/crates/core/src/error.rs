//! Error type shared by every numeric routine.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumError {
    #[error("gamma pole at {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("invalid data: {0}")]
    Data(String),
    #[error("io: {0}")]
    Io(String),
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, NumError>;
