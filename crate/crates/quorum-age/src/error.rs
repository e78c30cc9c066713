//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Distribution parameters outside their domain.
    #[error("invalid delay distribution: {0}")]
    InvalidDistribution(String),

    /// Quorum sizes outside `1..=n`.
    #[error("invalid quorum configuration: {0}")]
    InvalidQuorum(String),

    /// Any other argument outside an operation's domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The observed window contained too few successful deliveries to form
    /// renewal cycles; the run cannot produce age statistics.
    #[error(
        "simulation observed {complete} complete renewal cycles (need at least 2); \
         increase the interval count"
    )]
    TooFewCycles { complete: u64 },

    #[error("failed to write {path}")]
    WriteFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("i/o error")]
    Io(#[from] std::io::Error),

    #[error("csv encoding failed")]
    Csv(#[from] csv::Error),

    #[error("json encoding failed")]
    Json(#[from] serde_json::Error),
}
