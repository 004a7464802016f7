use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("domain error in {operation}: {detail}")]
    Domain {
        operation: &'static str,
        detail: String,
    },

    /// The integrand returned a non-finite value.
    #[error("non-finite integrand value {value} at abscissa {abscissa}")]
    NonFiniteIntegrand { abscissa: f64, value: f64 },

    /// A regularity identity of a unit deviance failed.
    #[error("regularity failure ({identity}): {detail}")]
    Regularity {
        identity: &'static str,
        detail: String,
    },

    #[error("unknown catalog entry `{name}`; valid entries: {valid}")]
    UnknownEntry { name: String, valid: String },

    /// All tabulated diagonal derivatives vanish at the requested point.
    #[error("degenerate point mu0 = {mu0}: diagonal derivatives of orders 3 and 4 vanish")]
    DegeneratePoint { mu0: f64 },

    /// A scenario does not satisfy the hypotheses of the limit result it
    /// is checked against.
    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("quadrature did not converge while {context}: value {value}, error estimate {error_estimate}")]
    QuadratureNotConverged {
        context: String,
        value: f64,
        error_estimate: f64,
    },
}

impl Error {
    pub fn domain(operation: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            operation,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
