use thiserror::Error;

/// Errors grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Gate(String),
    #[error("{0}")]
    NonConvergence(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Gate(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<nlsbvp::Error> for CliError {
    fn from(e: nlsbvp::Error) -> Self {
        use nlsbvp::Error as E;
        match e {
            E::Gate(_) => CliError::Gate(e.to_string()),
            E::NonConvergence { .. } | E::WindowFloor { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
