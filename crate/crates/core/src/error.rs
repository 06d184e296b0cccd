use std::path::PathBuf;

use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("parity error: {0}")]
    Parity(String),

    #[error("not constructible: {0}")]
    NotConstructible(String),

    #[error("bad ingredient: {0}")]
    BadIngredient(String),

    #[error("search budget of {budget} nodes exceeded for {what}")]
    SearchBudgetExceeded { what: String, budget: u64 },

    #[error("cache I/O error on {path}: {source}")]
    Cache {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("corrupt cache entry {key}: {reason}")]
    CorruptCache { key: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    pub(crate) fn not_constructible(msg: impl Into<String>) -> Self {
        Error::NotConstructible(msg.into())
    }

    pub(crate) fn bad_ingredient(msg: impl Into<String>) -> Self {
        Error::BadIngredient(msg.into())
    }
}
