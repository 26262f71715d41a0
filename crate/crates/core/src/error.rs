use thiserror::Error;

/// Errors raised by the arithmetic kernels and verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An operation received an argument outside its domain (division by zero, bad modulus).
    #[error("domain error: {0}")]
    Domain(String),

    /// Too few known digits remain to carry out an operation faithfully.
    #[error("precision error: {message} (valuation {valuation})")]
    Precision { message: String, valuation: String },

    /// A table or numeric type is too small for the requested computation.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// A fixed-point iteration stopped contracting.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// A user-supplied parameter violates a hypothesis (q even, j = 0, ...).
    #[error("{0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn precision(message: impl Into<String>, valuation: impl ToString) -> Self {
        Error::Precision {
            message: message.into(),
            valuation: valuation.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
