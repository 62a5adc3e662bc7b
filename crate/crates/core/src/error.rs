use thiserror::Error;

/// Errors raised by the numerical and algebraic routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 16")]
    InvalidGrid(usize),

    #[error("grid size mismatch: {left} vs {right}")]
    GridMismatch { left: usize, right: usize },

    #[error("spectral tail {tail:e} exceeds tolerance {tol:e}; raise the grid size")]
    Aliasing { tail: f64, tol: f64 },

    #[error("root finding did not converge at t = {t}: residual {residual:e}")]
    Convergence { t: f64, residual: f64 },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error(
        "no bump with values in [0, 1] reaches integral {target} (widest admissible reaches {max})"
    )]
    Mass { target: f64, max: f64 },

    #[error(
        "element is outside the epsilon-neighbourhood (epsilon = {epsilon}): \
         sup|g - id| = {displacement:e}, sup|g' - 1| = {stretch:e}"
    )]
    Neighbourhood {
        epsilon: f64,
        displacement: f64,
        stretch: f64,
    },

    #[error("derivative of the localized factor is not positive at t = {t}: {value}")]
    Derivative { t: f64, value: f64 },

    #[error("not an orientation preserving diffeomorphism: derivative {derivative} at t = {t}")]
    NotDiffeomorphism { t: f64, derivative: f64 },

    #[error("sample at t = {t} is outside the principal logarithm domain (distance to identity {distance})")]
    Branch { t: f64, distance: f64 },

    #[error("state would reach level {level}, above the truncation level {max}")]
    Truncation { level: u32, max: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
