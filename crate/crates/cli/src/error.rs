use thiserror::Error;

/// Errors surfaced by the command driver, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numeric error: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<nullform_core::Error> for CliError {
    fn from(e: nullform_core::Error) -> Self {
        use nullform_core::Error as E;
        match e {
            E::NoConvergence { .. } => CliError::Numeric(e.to_string()),
            E::Config(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
