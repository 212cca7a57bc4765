use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Engine(#[from] citnet_core::Error),

    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("script {path}: {message}")]
    Script { path: PathBuf, message: String },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Engine(e) => e.kind(),
            CliError::Read { .. } => "read",
            CliError::Write { .. } => "write",
            CliError::Script { .. } => "script",
            CliError::Usage(_) => "usage",
        }
    }

    /// 1 usage, 2 input format, 3 contract violation.
    pub fn exit_code(&self) -> u8 {
        use citnet_core::Error as E;
        match self {
            CliError::Usage(_) => 1,
            CliError::Read { .. } | CliError::Script { .. } => 2,
            CliError::Write { .. } => 1,
            CliError::Engine(e) => match e {
                E::Format { .. } | E::EmptyInput | E::DuplicateId(_) | E::UnknownEdgeEndpoint { .. } | E::Io(_) => 2,
                E::NotFound(_) | E::InvalidParameter(_) => 1,
                E::Contract(_) | E::Precondition(_) | E::NotMember(_) | E::Infeasible(_) => 3,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
