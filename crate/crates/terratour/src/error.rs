use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while reading or writing files and running the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] terratour_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed ascii grid: {0}")]
    MalformedGrid(String),

    /// A cell carries the declared NODATA value. There is no infill policy.
    #[error("nodata-present: row {row}, column {col}")]
    NodataPresent { row: usize, col: usize },

    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed GTSPLIB text: {0}")]
    Gtsplib(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("inconsistent inputs: {0}")]
    Mismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Reads a whole file, attaching the path to any failure.
pub fn read_to_string(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes a whole file, attaching the path to any failure.
pub fn write(path: &std::path::Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}
