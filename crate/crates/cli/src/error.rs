use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` / `--version` output; not an error for the exit code.
    #[error("{0}")]
    Help(String),

    #[error("{0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<ptmathieu::MathieuError> for CliError {
    fn from(e: ptmathieu::MathieuError) -> Self {
        use ptmathieu::MathieuError::*;
        match e {
            NonFinite { .. } | NoBracket { .. } | VerificationFailed { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
