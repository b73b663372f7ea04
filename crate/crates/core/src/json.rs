//! Reading documents while keeping malformed JSON apart from domain errors.

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

/// Failure to read a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocError {
    /// Not JSON, or not of the expected shape.
    Malformed(String),
    /// Well-formed but rejected by a constructor.
    Domain(Error),
}

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DocError::Malformed(m) => write!(f, "malformed input: {m}"),
            DocError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DocError {}

pub trait FromJson: Sized {
    fn from_json(v: serde_json::Value) -> std::result::Result<Self, DocError>;
}

pub(crate) fn parse_with<R: DeserializeOwned, T>(
    v: serde_json::Value,
    build: impl FnOnce(R) -> Result<T>,
) -> std::result::Result<T, DocError> {
    let repr: R = serde_json::from_value(v).map_err(|e| DocError::Malformed(e.to_string()))?;
    build(repr).map_err(DocError::Domain)
}
