//! Hardy field sequences, independence classes, PET reduction and an
//! ergodic-averages lab.

pub mod numeric;
pub mod pet;
pub mod hardy;
pub mod independence;
pub mod input;
pub mod lab;
pub mod linalg;
pub mod scalar;
pub mod suite;
pub mod taylor;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("product leaves the declared basis: `{0}`")]
    BasisOverflow(String),
    #[error("outside supported class: {0}")]
    OutsideClass(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("numeric certification failed: {0}")]
    Numeric(String),
    #[error("no admissible parameters: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::UndeclaredSymbol(_) => "undeclared_symbol",
            Error::BasisOverflow(_) => "basis_overflow",
            Error::OutsideClass(_) => "outside_class",
            Error::Invalid(_) => "invalid",
            Error::Numeric(_) => "numeric",
            Error::NoSolution(_) => "no_solution",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({"schema": "hardy-ergo/error/v1", "error": self.kind(), "message": self.to_string()});
        if let Error::Parse { pos, .. } = self {
            v["pos"] = serde_json::json!(pos);
        }
        v
    }
}
