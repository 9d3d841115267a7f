use thiserror::Error;

/// Failures reported by the numerical and algebraic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{context}: error estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    NonConvergence {
        context: String,
        estimate: f64,
        tolerance: f64,
    },
    #[error("operator degree {degree} exceeds the cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },
    #[error("operands are defined over different mode sets")]
    ModeSetMismatch,
    #[error("finite-difference stencil too close to a singular set: {0}")]
    Proximity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
