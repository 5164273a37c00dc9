use thiserror::Error;

/// Errors raised by transforms and constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (angles, indices).
    #[error("domain error: {0}")]
    Domain(String),

    /// Two objects that must share a band-limit, spin or grid do not.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Invalid construction parameters.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Requested wavelet scale is not part of the family.
    #[error("scale {j} outside [{j0}, {j_max}]")]
    Scale { j: i64, j0: usize, j_max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dimension<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Dimension(msg.into()))
}

pub(crate) fn parameter<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
