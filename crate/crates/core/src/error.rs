use alloc::string::String;

use crate::Rate;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A shipped or user-supplied protograph asset could not be used.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unsupported code rate {0}")]
    UnsupportedRate(Rate),
    #[error("invalid block length: {0}")]
    InvalidBlockLength(String),
    #[error("invalid shift assignment: {0}")]
    InvalidAssignment(String),
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
    #[error("code construction failed: {0}")]
    ConstructionFailure(String),
    #[error("invalid code spec: {0}")]
    InvalidSpec(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
