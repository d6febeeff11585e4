use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative eigensolver ran out of iterations.
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// A computed result failed its a-posteriori check.
    #[error("numerical failure: {what} residual {residual:e} exceeds {tolerance:e}")]
    NumericalFailure {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
