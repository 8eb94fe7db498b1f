use thiserror::Error;

/// Errors raised by the graph, matrix, sampling and simulation routines.
///
/// Root finding has its own error type, [`crate::rootfind::RootFindError`],
/// because its failures carry the partial iterate list.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("unsupported graph size {n} (limit {limit})")]
    UnsupportedSize { n: usize, limit: usize },

    #[error("matrix is not symmetric at ({row}, {col}): {a} vs {b}")]
    Asymmetric { row: usize, col: usize, a: f64, b: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex {0} has no neighbours")]
    IsolatedVertex(usize),

    #[error("graph is bipartite; the plain averaging iteration oscillates (enable the lazy update)")]
    Bipartite,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
