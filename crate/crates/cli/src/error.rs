use thiserror::Error;

/// Everything the command line can fail with. Each variant maps to one exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("invalid instance: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] nfold_core::Error),
}

impl CliError {
    /// 2 for malformed input, 3 for resource limits.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(e) if e.is_resource_limit() => 3,
            CliError::Solver(nfold_core::Error::InvalidInstance(_))
            | CliError::Solver(nfold_core::Error::DimensionMismatch(_))
            | CliError::Solver(nfold_core::Error::InvalidTable(_))
            | CliError::Solver(nfold_core::Error::InconsistentMargins { .. }) => 2,
            CliError::Solver(_) => 1,
            _ => 2,
        }
    }
}
