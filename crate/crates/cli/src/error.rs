use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },
    #[error("{0}")]
    Core(rmt_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Validation { .. } => 2,
            _ => 1,
        }
    }
}

impl From<rmt_core::Error> for CliError {
    fn from(e: rmt_core::Error) -> Self {
        match e {
            rmt_core::Error::Invalid { field, reason } => CliError::Validation { field: field.into(), reason },
            rmt_core::Error::OddN(n) => CliError::Validation { field: "n".into(), reason: format!("must be even (got {n})") },
            other => CliError::Core(other),
        }
    }
}

pub fn invalid<T>(field: &str, reason: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Validation { field: field.into(), reason: reason.into() })
}
