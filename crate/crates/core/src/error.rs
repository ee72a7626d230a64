use thiserror::Error;

/// Errors raised by the kinematics, algebra and cross-section routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Kinematic input violates a physical constraint (on-shell, conservation).
    #[error("invalid kinematics: {0}")]
    Validation(String),

    /// A propagator or angular pole was hit.
    #[error("pole: {0}")]
    Pole(String),

    /// A ratio was requested against a vanishing reference value.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Symbolic trace strings are limited in length.
    #[error("gamma string has {len} factors, the limit is {max}")]
    Capacity { len: usize, max: usize },

    /// Adaptive quadrature hit its depth cap before reaching tolerance.
    #[error("quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    NonConvergence { estimate: f64, error: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn pole(msg: impl Into<String>) -> Error {
    Error::Pole(msg.into())
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
