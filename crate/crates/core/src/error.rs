use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the region where the requested quantity is real or defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request is well-formed but not supported by the chosen construction.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A quantity that must be nonzero vanished (e.g. no effective field).
    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("eigensolver did not converge (dimension {dim})")]
    Convergence { dim: usize },

    #[error("step error: {0}")]
    Step(String),

    #[error("residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("config error: {0}")]
    Config(String),
}
