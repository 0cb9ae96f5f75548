use thiserror::Error;

use crate::collection::Field;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: dim {left_dim}/degree {left_degree} vs dim {right_dim}/degree {right_degree}")]
    Shape {
        left_dim: usize,
        left_degree: usize,
        right_dim: usize,
        right_degree: usize,
    },

    #[error("{op} is not supported for {field} collections{hint}")]
    UnsupportedField {
        op: &'static str,
        field: Field,
        hint: &'static str,
    },

    #[error("vector {index} has norm {norm}, expected 1 (pass renormalize to rescale)")]
    NotUnitNorm { index: usize, norm: f64 },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("singular expansion: constant coefficient {0} must be positive")]
    SingularExpansion(f64),

    #[error("requested order {requested} exceeds series truncation order {available}")]
    Truncation { requested: usize, available: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code used by the `ecc` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io(_) => 3,
            Error::NotUnitNorm { .. } | Error::Validation(_) => 4,
            Error::Resource(_) => 5,
            Error::InvalidInput(_)
            | Error::Shape { .. }
            | Error::UnsupportedField { .. }
            | Error::SingularExpansion(_)
            | Error::Truncation { .. } => 2,
        }
    }
}
