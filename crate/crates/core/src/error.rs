use thiserror::Error;

/// Everything that can go wrong while evaluating a kernel, a transform or a
/// verification suite.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("incompatible lattices: {0}")]
    IncompatibleLattice(String),

    /// The sampled integrand is still large on the boundary of its box.
    #[error("truncation check failed: boundary/interior ratio {ratio:.3e} exceeds {threshold:.1e}")]
    Truncation { ratio: f64, threshold: f64 },

    /// Successive refinements of a quadrature disagree by more than the target.
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("singular evaluation: {0}")]
    Singularity(String),

    /// A quantity that must be real came out with a sizeable imaginary part.
    #[error("imaginary residual {residual:.3e} exceeds tolerance {tolerance:.1e}")]
    ImaginaryResidual { residual: f64, tolerance: f64 },

    /// Two independent evaluation paths of the same quantity disagree.
    #[error("evaluation paths disagree by {difference:.3e} (tolerance {tolerance:.1e})")]
    PathDisagreement { difference: f64, tolerance: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
