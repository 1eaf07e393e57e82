use std::path::PathBuf;

use crate::domain::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    /// A physical formula was called outside its domain (non-positive
    /// distance or antenna height).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid scenario: {}", join_violations(.0))]
    InvalidScenario(Vec<Violation>),

    #[error("no access point to associate")]
    NoAccessPoint,

    #[error("exhaustive search over {colorings} colorings exceeds the cap of {cap}")]
    SearchSpaceTooLarge { colorings: f64, cap: u64 },

    #[error("malformed interference matrix: {0}")]
    Matrix(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
