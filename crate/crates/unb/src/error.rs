use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// One or more configuration invariants are violated. Every violation is
    /// listed, each message naming the offending field.
    #[error("invalid configuration:\n{}", .violations.join("\n"))]
    Validation { violations: Vec<String> },

    /// A guarded enumeration (band compositions) would exceed its size limit.
    #[error("{0}")]
    Guard(String),

    /// Adaptive quadrature stopped before reaching the requested tolerance.
    #[error("quadrature did not converge: achieved error {achieved:.3e}, requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    /// An argument is outside its mathematical domain.
    #[error("{0}")]
    Domain(String),

    /// Scenario file could not be read or parsed.
    #[error("config error: {0}")]
    Config(String),

    /// A Monte Carlo realization failed; the index identifies which one.
    #[error("realization {index}: {message}")]
    Realization { index: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
