use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("empty graph")]
    EmptyGraph,

    #[error("invalid node id {0}")]
    InvalidNode(usize),

    #[error("isolated node {0}")]
    IsolatedNode(usize),

    #[error("degenerate APPR for seed {0}: no non-seed entries")]
    DegenerateAppr(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid cluster: {0}")]
    InvalidCluster(String),

    #[error("size limit exceeded: {what} is {actual}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("empty alias table: no positive mass")]
    EmptyDistribution,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("degenerate training set: {0}")]
    DegenerateTrainingSet(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("holdout infeasible: {0}")]
    HoldoutInfeasible(String),

    #[error("no usable classes")]
    NoUsableClasses,

    #[error("mismatched class sets: {0}")]
    MismatchedClasses(String),

    #[error("malformed file: {0}")]
    Format(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 usage, 2 data, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) => 1,
            Error::Numerical(_) | Error::Singular(_) => 3,
            _ => 2,
        }
    }
}
