use std::io;

use thiserror::Error;

/// Errors raised by network construction, ingestion and the analysis passes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate publication id `{0}`")]
    DuplicateId(String),

    #[error("citation `{citing}` -> `{cited}` references an unknown publication")]
    UnknownEdgeEndpoint { citing: String, cited: String },

    #[error("publication `{0}` not found")]
    NotFound(String),

    #[error("publication `{0}` is not a member of the current network")]
    NotMember(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("no parseable records in input")]
    EmptyInput,

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("infeasible layout: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Short stable tag, used for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateId(_) => "duplicate-id",
            Error::UnknownEdgeEndpoint { .. } => "unknown-endpoint",
            Error::NotFound(_) => "not-found",
            Error::NotMember(_) => "not-member",
            Error::Precondition(_) => "precondition",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Contract(_) => "contract",
            Error::EmptyInput => "empty-input",
            Error::Format { .. } => "format",
            Error::Infeasible(_) => "infeasible",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn format(line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
