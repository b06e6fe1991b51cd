use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A value that must be finite was not, or an input lies outside the
    /// domain of the function (e.g. `r <= 0`).
    #[error("numeric domain error: {0}")]
    NumericDomain(String),

    /// Effective potential overflowed at a grid point.
    #[error("effective potential is not finite at grid point {index} (r = {r:e})")]
    PotentialOverflow { index: usize, r: f64 },

    #[error("tabulated potential queried at r = {r} outside the sampled range [{min}, {max}]")]
    Extrapolation { r: f64, min: f64, max: f64 },

    #[error("time step dt = {dt:e} too large: Crank-Nicolson matrix loses positive definiteness at row {row}; use a smaller dt")]
    StepTooLarge { dt: f64, row: usize },

    #[error("zero or non-finite pivot at row {row} of tridiagonal solve")]
    ZeroPivot { row: usize },

    #[error("state is not normalized")]
    NotNormalized,

    /// Gram-Schmidt removed (almost) everything: the trial function lies
    /// in the span of the lower states.
    #[error("trial function collapsed onto lower states (residual norm ratio {ratio:e}); try a different initial guess")]
    Collapse { ratio: f64 },

    #[error("problem size {n} exceeds the dense limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("{0}")]
    Parse(String),
}
