use std::fmt;

/// Failure classes, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters outside a model's domain.
    Usage(String),
    /// Series non-convergence, quadrature failure or I/O trouble.
    Numeric(String),
    /// `verify` ran and at least one check failed.
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    /// Wraps a library error with the parameter point that produced it.
    pub fn at(err: fadinglab::Error, point: impl fmt::Display) -> Self {
        match err {
            fadinglab::Error::Domain(msg) => CliError::Usage(format!("{msg} ({point})")),
            other => CliError::Numeric(format!("{other} at {point}")),
        }
    }
}

impl From<fadinglab::Error> for CliError {
    fn from(err: fadinglab::Error) -> Self {
        match err {
            fadinglab::Error::Domain(msg) => CliError::Usage(msg),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Numeric(format!("I/O error: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::VerifyFailed => write!(f, "verification failed"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
