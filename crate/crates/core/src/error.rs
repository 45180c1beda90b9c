use thiserror::Error;

pub type Result<T> = std::result::Result<T, DpError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DpError {
    #[error("invalid privacy budget: {0}")]
    InvalidBudget(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid sensitivity: {0}")]
    InvalidSensitivity(String),

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("privacy budget exhausted: requested ({requested_eps}, {requested_delta}), remaining ({remaining_eps}, {remaining_delta})")]
    BudgetExhausted {
        requested_eps: f64,
        requested_delta: f64,
        remaining_eps: f64,
        remaining_delta: f64,
    },

    #[error("optimization failed: {0}")]
    Optimization(String),
}

impl DpError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        DpError::InvalidInput(msg.into())
    }

    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        DpError::DimensionMismatch(msg.into())
    }
}
