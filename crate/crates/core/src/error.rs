use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("insufficient data: need {required} values, have {available}")]
    InsufficientData { required: usize, available: usize },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    Solver {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error(
        "quadrature did not reach tolerance {tolerance:e} (achieved error estimate {achieved:e})"
    )]
    Quadrature { achieved: f64, tolerance: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(
        "Monte Carlo run aborted at trial {trial} after {completed} completed trials: {reason}"
    )]
    Aborted {
        trial: usize,
        completed: usize,
        reason: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}
