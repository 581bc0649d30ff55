use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The Fock truncation cuts more trace weight than allowed.
    #[error("insufficient Fock dimension {dim}: truncated tail mass {tail_mass:.3e} exceeds tolerance {tolerance:.1e}")]
    Truncation {
        dim: usize,
        tail_mass: f64,
        tolerance: f64,
    },

    #[error("effective gain is undefined for a vacuum input (nbar = 0)")]
    UndefinedGain,

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    #[error(
        "quadrature did not converge: estimate {value:.6e}, error estimate {error_estimate:.3e}"
    )]
    Quadrature { value: f64, error_estimate: f64 },

    #[error("sigma = {sigma} violates the Gaussian phase validity guard sigma < (2 pi)^2")]
    ValidityGuard { sigma: f64 },

    #[error("negative outcome probability q({index}) = {value:.3e}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("ratio undefined: {0}")]
    UndefinedRatio(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
