use std::path::PathBuf;

use crate::model::FlightId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Some flights are not covered by any legal pairing.
    #[error("{} flight(s) cannot be covered by any legal pairing: {:?}", .0.len(), .0)]
    Uncoverable(Vec<FlightId>),

    /// Fitness was requested for a chromosome that violates the coverage constraint.
    #[error("chromosome leaves {uncovered} flight(s) uncovered")]
    InfeasibleChromosome { uncovered: usize },

    /// Repair needed to activate a pairing but every gene is already active.
    #[error("chromosome of length {length} has no gene left to activate")]
    ChromosomeFull { length: usize },

    #[error("exact solver guard: {pairings} pairings exceeds limit {limit}")]
    TooLarge { pairings: usize, limit: usize },

    #[error("reference cost must be positive, got {0}")]
    NonPositiveReference(i64),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by the instance admitting no feasible cover.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Uncoverable(_))
    }

    /// True for file-system and file-format failures.
    pub fn is_io(&self) -> bool {
        matches!(
            self,
            Error::Io { .. } | Error::Json { .. } | Error::Parse { .. }
        )
    }
}
