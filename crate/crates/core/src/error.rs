use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("infeasible input: {0}")]
    InfeasibleInput(String),

    /// The enumeration would exceed the configured budget. `checked` counts the
    /// candidates examined before stopping.
    #[error("resource limit: {message} ({checked} checked)")]
    ResourceLimit { message: String, checked: u64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
