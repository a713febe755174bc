use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two sketches (or a sketch and a config) cannot be combined.
    #[error("incompatible sketch configuration: {0}")]
    Config(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edges")]
    EmptyGraph,

    #[error("requested {requested} edges but at most {max} fit in a simple graph on {nodes} nodes")]
    Capacity { requested: u64, max: u64, nodes: usize },

    #[error("index {index} out of range for {len} nodes")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed binary data: {0}")]
    Format(String),

    #[error("time budget of {0:.1}s exceeded")]
    BudgetExceeded(f64),

    #[error(transparent)]
    Io(#[from] io::Error),
}
