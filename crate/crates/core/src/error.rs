use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unknown function `{name}` (valid: sphere, rosenbrock, rastrigin, ackley1)")]
    UnknownFunction { name: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot sample {requested} items from a pool of {available}")]
    NotEnoughItems { requested: usize, available: usize },

    #[error("batch of {batch} exceeds archive capacity {capacity}")]
    BatchTooLarge { batch: usize, capacity: usize },

    #[error("roulette weights are all zero or invalid")]
    DegenerateWeights,

    #[error("individual has no fitness; evaluate it before survivor selection")]
    Unevaluated,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
