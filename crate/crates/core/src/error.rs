//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation point outside the region where the object is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid warping profile: {0}")]
    InvalidProfile(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A solution (closed form or grid) took a non-positive value.
    #[error("positivity failure at r = {r}, t = {t}: u = {value}")]
    Positivity { r: f64, t: f64, value: f64 },

    /// Inconsistent data, e.g. u(x, t) above the supplied upper bound M.
    #[error("data error: {0}")]
    Data(String),

    /// An estimate or check was applied outside its hypotheses.
    #[error("misuse: {0}")]
    Misuse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
