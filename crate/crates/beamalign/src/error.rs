//! Shared error type.
//!
//! The pipeline threads one error enum through every stage so a sweep can
//! record per-experiment failures as short status labels instead of
//! aborting the whole run.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong between channel synthesis and root
/// selection.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Arguments violate an operation's domain contract (sizes, ranges,
    /// non-finite inputs, mismatched truncation parameters).
    Domain(String),
    /// Thresholding removed every term of a derivative series.
    EmptyTruncation,
    /// The eigenvalue linearization is singular for every trial shift and
    /// the system shows no sign of a positive-dimensional component.
    DegenerateSystem(String),
    /// The two polynomials share a positive-dimensional solution set, so
    /// there is no finite list of isolated roots to report.
    NonIsolatedRoots,
    /// Filesystem failure, with the offending path attached.
    Io { path: String, message: String },
}

impl Error {
    /// Short machine-friendly label for CSV status columns. Must not
    /// contain commas.
    pub fn label(&self) -> String {
        match self {
            Error::Domain(_) => "domain error".to_string(),
            Error::EmptyTruncation => "empty truncation".to_string(),
            Error::DegenerateSystem(_) => "degenerate system".to_string(),
            Error::NonIsolatedRoots => "non-isolated roots".to_string(),
            Error::Io { .. } => "io error".to_string(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::EmptyTruncation => {
                write!(f, "threshold truncation removed every series term")
            }
            Error::DegenerateSystem(msg) => write!(f, "degenerate system: {msg}"),
            Error::NonIsolatedRoots => {
                write!(f, "system has a positive-dimensional root component")
            }
            Error::Io { path, message } => write!(f, "io error on {path}: {message}"),
        }
    }
}

impl std::error::Error for Error {}
