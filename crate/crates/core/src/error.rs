use thiserror::Error;

/// Errors raised by the estimation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("could not bracket a maximum: {0}")]
    Bracketing(String),

    #[error("no sign change found: {0}")]
    NoSignChange(String),

    /// The entangled probe does not beat separable probes at this noise width.
    #[error("no advantage region: gamma = {gamma} is not above the threshold {gamma0}")]
    NoAdvantage { gamma: f64, gamma0: f64 },

    #[error("likelihood underflow: {0}")]
    Underflow(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
