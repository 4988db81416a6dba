use thiserror::Error;

/// Errors raised by the model library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gamma = {0} exceeds the supported maximum of {max}", max = crate::hypergeom::MAX_GAMMA)]
    GammaTooLarge(u32),

    #[error("hypergeometric series undefined: lower parameter c = {0} is a nonpositive integer")]
    NonpositiveLowerParameter(f64),

    #[error("x = {0} lies outside the admissible range")]
    OutOfDomain(f64),

    #[error("temperature must be strictly positive, got {0}")]
    NonpositiveTemperature(f64),

    #[error("quadrature did not converge within the maximum subdivision depth {0}")]
    MaxDepthExceeded(u32),

    #[error("integrator produced a non-finite state at x = {0}")]
    NonfiniteState(f64),

    #[error("no bracket: {0}")]
    NoBracket(String),

    #[error("target {target} outside achievable range [{lo}, {hi}]")]
    TargetOutOfRange { target: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, ModelError>;
