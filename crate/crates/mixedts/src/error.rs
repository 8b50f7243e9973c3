//! Crate-wide error type.

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A parameter violates its admissibility constraints.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The stability index hits a value the closed-form exponents do not
    /// cover (`alpha = 1`) or that callers must route to the Gaussian
    /// reduction (`alpha = 2`).
    #[error("unsupported stability index alpha = {0}")]
    UnsupportedAlpha(f64),

    /// An argument lies outside the domain of the requested transform.
    #[error("domain error: {0}")]
    Domain(String),

    /// Not enough data to carry out the requested computation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A numerical procedure failed to converge or produced a degenerate
    /// intermediate quantity.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Input/output and parsing failures raised by file-facing helpers.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
