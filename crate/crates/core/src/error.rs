use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A series or iteration ran out of its term budget before meeting the
    /// requested tolerance.
    #[error("{what} did not converge within {terms} terms")]
    NonConvergence { what: String, terms: usize },

    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature could not reach the requested accuracy.
    #[error("quadrature failed: estimated error {error:e} exceeds tolerance {tolerance:e}")]
    QuadratureFailure { error: f64, tolerance: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn non_convergence(what: impl Into<String>, terms: usize) -> Self {
        Error::NonConvergence {
            what: what.into(),
            terms,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
