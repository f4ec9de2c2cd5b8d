use thiserror::Error;

/// Errors produced by the library. Each variant maps to a stable FFI code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("band limit violated: {0}")]
    BandLimit(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("frequency outside the representable window: {0}")]
    OutsideWindow(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("symbol has no off-lattice values: {0}")]
    LatticeOnly(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("partition does not cover: {0}")]
    CoverFailure(String),
    #[error("too few points for a fit: {0}")]
    InsufficientPoints(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl LabError {
    /// Stable numeric code, used by the C interface.
    pub fn code(&self) -> i32 {
        match self {
            LabError::InvalidGrid(_) => 2,
            LabError::BandLimit(_) => 3,
            LabError::GridMismatch(_) => 4,
            LabError::OutsideWindow(_) => 5,
            LabError::InvalidParameter(_) => 6,
            LabError::Degenerate(_) => 7,
            LabError::LatticeOnly(_) => 8,
            LabError::Quadrature(_) => 9,
            LabError::CoverFailure(_) => 10,
            LabError::InsufficientPoints(_) => 11,
            LabError::Config(_) => 12,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
