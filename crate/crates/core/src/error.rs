use thiserror::Error;

/// Errors raised by the verification toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested basis is not orthogonal on the chosen domain.
    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),

    /// The body frame cannot be built from the given vector.
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),

    /// A state was passed in a basis the operation does not accept.
    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: String, found: String },

    /// Empty or all-zero input where content is required.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// The constraint system leaves no admissible vectors.
    #[error("constraint rank error: {0}")]
    ConstraintRank(String),

    /// Malformed serialized input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
