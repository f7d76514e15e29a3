use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The data does not have the shape required to build the value at all
    /// (length mismatch, unknown label, missing vacuum).
    #[error("malformed {field}: {reason}")]
    Malformed { field: String, reason: String },

    #[error("state belongs to system {found:?}, expected {expected:?}")]
    SystemMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("state has off-diagonal entry ({row}, {col}) of magnitude {magnitude:e}")]
    OffDiagonal {
        row: usize,
        col: usize,
        magnitude: f64,
    },

    #[error("enumeration requires integer source dimensions; {label} has d = {dim}")]
    NonIntegerDimension { label: String, dim: f64 },

    #[error("invalid vacuum column: {0}")]
    InvalidVacuumColumn(String),

    #[error("invalid permutation duality: {0}")]
    InvalidDuality(String),

    #[error("search space too large: {0}")]
    SearchTooLarge(String),

    #[error("point leaves the probability simplex: {0}")]
    SimplexViolation(String),

    #[error("multiplicity for {label} must be positive, got {value}")]
    NonPositiveMultiplicity { label: String, value: i64 },

    #[error("unknown catalog entry {0:?}")]
    UnknownCatalogEntry(String),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("unsupported schema_version {found}, expected {expected}")]
    SchemaVersion { found: u32, expected: u32 },

    #[error("cannot parse number {0:?}")]
    ParseNumber(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn malformed(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Malformed {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
