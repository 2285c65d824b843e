use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported material model for {operation}: {model}")]
    UnsupportedModel {
        operation: &'static str,
        model: &'static str,
    },

    #[error(
        "{what} did not converge: error estimate {achieved:.3e} exceeds requested {requested:.3e}"
    )]
    NotConverged {
        what: String,
        achieved: f64,
        requested: f64,
    },

    /// Failure in the oscillatory (propagating-wave) part of a real-axis integral.
    #[error(
        "oscillatory integral {what} did not converge: error estimate {achieved:.3e} exceeds requested {requested:.3e}"
    )]
    OscillatoryNotConverged {
        what: String,
        achieved: f64,
        requested: f64,
    },

    #[error("could not bound the tail of {0}")]
    Truncation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
