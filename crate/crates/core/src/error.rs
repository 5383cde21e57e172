use thiserror::Error;

use crate::detectors::DetectorKind;

/// Errors returned by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constellation order that the requested construction cannot satisfy.
    #[error("invalid constellation order {order}: {reason}")]
    InvalidOrder { order: usize, reason: &'static str },

    /// A numeric argument was NaN or infinite where a finite value is required.
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),

    /// Noise standard deviation must be strictly positive.
    #[error("invalid noise sigma {0}: must be positive and finite")]
    InvalidNoise(f64),

    /// The operation is only defined in the other signal domain.
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(&'static str),

    /// The operation does not cover this detector kind.
    #[error("unsupported detector kind `{kind}`: {reason}")]
    UnsupportedKind {
        kind: DetectorKind,
        reason: &'static str,
    },

    /// SNR/INR values outside the admissible range.
    #[error("invalid link budget: {0}")]
    InvalidBudget(&'static str),

    /// An inconsistent Monte Carlo sweep configuration.
    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
