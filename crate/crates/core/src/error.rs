use thiserror::Error;

use crate::scalar::Field;

/// Errors raised by the algebra, module and operator layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("modulus {0} is not a supported prime")]
    NotPrime(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("basis index {0} is outside the operator's declared index set")]
    IndexOutOfDomain(String),

    #[error("unsupported operator: {0}")]
    Unsupported(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

impl AlgebraError {
    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        AlgebraError::Parse {
            line,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            AlgebraError::InvalidInput(_) => "invalid-input",
            AlgebraError::FieldMismatch { .. } => "field-mismatch",
            AlgebraError::DimensionMismatch(_) => "dimension-mismatch",
            AlgebraError::NotPrime(_) => "not-prime",
            AlgebraError::DivisionByZero => "division-by-zero",
            AlgebraError::Parse { .. } => "parse",
            AlgebraError::IndexOutOfDomain(_) => "index-out-of-domain",
            AlgebraError::Unsupported(_) => "unsupported",
            AlgebraError::InternalInconsistency(_) => "internal-inconsistency",
        }
    }
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
