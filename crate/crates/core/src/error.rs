use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-invertible series: constant term {0} is not a unit")]
    NonInvertible(String),

    #[error("requested error {target:e} not reached (achieved {achieved:e})")]
    TargetNotMet { target: f64, achieved: f64 },

    #[error("imaginary residue {residue:e} exceeds tolerance {tolerance:e} at k = {k}")]
    ImaginaryResidue { k: u64, residue: f64, tolerance: f64 },

    #[error("pole: denominator indistinguishable from zero at {0}")]
    Pole(String),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

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
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::domain(msg)
}
