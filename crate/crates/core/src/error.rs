use thiserror::Error;

use crate::coeff::FieldTag;

/// Errors raised by the algebraic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("Witt ring mismatch: {0} vs {1}")]
    DescriptorMismatch(FieldTag, FieldTag),

    #[error("generator context mismatch")]
    ContextMismatch,

    #[error("compatibility error: {0}")]
    Compatibility(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeOverflow { degree: u32, cap: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("rank error: {0}")]
    Rank(String),

    #[error("syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
