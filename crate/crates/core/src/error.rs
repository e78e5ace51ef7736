use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("self-loop {0} -> {0} is not allowed")]
    SelfLoop(usize),

    #[error("arc {0} -> {1} already present")]
    DuplicateArc(usize, usize),

    #[error("arc {0} -> {1} not present")]
    MissingArc(usize, usize),

    #[error("graph has no arcs")]
    EmptyGraph,

    #[error("graph is complete, no absent dyad to choose")]
    CompleteGraph,

    #[error("model configuration: {0}")]
    Model(String),

    #[error("sampler: {0}")]
    Sampler(String),

    #[error("estimation: {0}")]
    Estimation(String),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("covariance matrix is (nearly) singular (condition number {0:e})")]
    Singular(f64),

    #[error("no converged runs to pool")]
    NoConvergedRuns,

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(path: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
