use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Structurally invalid data: wrong shapes, broken algebraic relations, bad encodings.
    #[error("malformed input: {0}")]
    Malformed(String),
    /// Well-formed data that violates the hypothesis an operation needs.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Mixing elements of different coefficient fields.
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn malformed(msg: impl Into<String>) -> Error {
    Error::Malformed(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
