use std::fmt;
use std::io;
use std::path::PathBuf;

use speclab_core::geometry::GeometryError;
use speclab_core::identity::IdentityError;
use speclab_core::inequalities::InequalityError;
use thiserror::Error;

/// A scenario or domain file that does not match the schema. `pointer` is a
/// JSON pointer to the offending field.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() {
            "/"
        } else {
            &self.pointer
        };
        write!(f, "SchemaError at {at}: {}", self.message)
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: invalid JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Schema(#[from] SchemaError),
    /// A check whose prerequisites the domain does not meet.
    #[error("{} at {pointer}: {source}", prerequisite_name(source))]
    Prerequisite {
        pointer: String,
        #[source]
        source: GeometryError,
    },
    #[error(transparent)]
    Inequality(#[from] InequalityError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
}

fn prerequisite_name(e: &GeometryError) -> &'static str {
    match e {
        GeometryError::NotConvex => "NotConvex",
        GeometryError::EmptyPart(_) | GeometryError::MissingPart(_) => "EmptyPart",
        _ => "InvalidDomain",
    }
}

impl RunError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        RunError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Exit status when no theorem with satisfied hypotheses is violated.
pub const EXIT_OK: u8 = 0;
/// Exit status for configuration, IO and computation errors.
pub const EXIT_ERROR: u8 = 1;
/// Exit status when a theorem with satisfied hypotheses is violated.
pub const EXIT_VIOLATION: u8 = 2;
