use std::path::PathBuf;

/// Errors produced by the scan-to-simulation library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("index {index} out of range (count {count}) in {context}")]
    IndexOutOfRange {
        index: usize,
        count: usize,
        context: String,
    },

    #[error("mesh is empty")]
    EmptyMesh,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("field '{name}' has {actual} values, expected {expected}")]
    FieldLength {
        name: String,
        expected: usize,
        actual: usize,
    },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("set '{0}' does not exist")]
    MissingSet(String),

    #[error("set '{0}' already exists")]
    DuplicateSet(String),

    #[error("selection '{0}' is empty")]
    EmptySelection(String),

    #[error("degenerate element {element}: {reason}")]
    DegenerateElement { element: usize, reason: String },

    #[error("element {element} has non-positive Jacobian determinant {det:e}")]
    NonPositiveJacobian { element: usize, det: f64 },

    #[error("voxelization produced no occupied cells")]
    NoOccupiedCells,

    #[error("system is under-constrained: {0}")]
    UnderConstrained(String),

    #[error("solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("mesh has zero surface area")]
    ZeroArea,

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("point cloud has zero radius (all points coincide)")]
    ZeroRadius,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
