//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the toolkit.
///
/// The CLI maps these onto process exit codes: validation and domain
/// errors exit 2, data and transport errors exit 3, numeric-contract
/// violations exit 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A precondition on arguments or configuration was violated.
    #[error("validation error: {0}")]
    Validation(String),

    /// An argument left the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Network or remote-data failure.
    #[error("transport error: {0}")]
    Transport(String),

    /// A cache entry is inconsistent with its metadata.
    #[error("cache integrity error: {0}; purge the cache entry and retry")]
    CacheIntegrity(String),

    /// A numeric invariant that the data should satisfy does not hold.
    #[error("numeric contract violation: {0}")]
    NumericContract(String),

    /// The smoothness scan found no rough region.
    #[error("no cloud found: all {scanned} scanned windows scored non-negative")]
    NoCloudFound { scanned: usize },

    /// A distribution fit has no admissible parameter for the data.
    #[error("fit infeasible: {0}")]
    FitInfeasible(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Domain(_) => 2,
            Error::Parse { .. }
            | Error::Transport(_)
            | Error::CacheIntegrity(_)
            | Error::Io(_) => 3,
            Error::NumericContract(_) | Error::NoCloudFound { .. } | Error::FitInfeasible(_) => 4,
        }
    }
}
