use alloc::string::String;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The caller supplied data or parameters outside an operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A covariance or correlation matrix failed the semidefiniteness check.
    #[error("matrix is not positive semidefinite: {0}")]
    NotPositiveSemidefinite(String),
    /// A numerical routine could not produce a finite answer.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = core::result::Result<T, Error>;
