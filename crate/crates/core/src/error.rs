use std::path::PathBuf;

use thiserror::Error;

use crate::io::ParseError;
use crate::validate::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("invalid model table: {0}")]
    ModelTable(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("network failed validation ({} violation(s)); first: {}", .0.len(), .0.first_message())]
    Invalid(ValidationReport),

    #[error("cannot assemble network: {0}")]
    Assemble(String),

    #[error("invalid assignment: {0}")]
    Assignment(String),

    #[error("invalid generator spec: {0}")]
    Spec(String),

    #[error("simulation: {0}")]
    Sim(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
