use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{function}: argument outside the supported domain ({detail})")]
    Domain { function: &'static str, detail: String },

    #[error("{0}: exact integer range exceeded")]
    Overflow(&'static str),

    #[error("quadrature did not converge: estimate {estimate:e}, error estimate {error:e} > {tolerance:e}")]
    NoConvergence { estimate: f64, error: f64, tolerance: f64 },
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
