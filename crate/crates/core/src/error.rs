use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid fiber graph: {0}")]
    InvalidGraph(String),

    #[error("capacity exceeded: {what} is {got}, limit is {limit}")]
    Capacity {
        what: &'static str,
        got: usize,
        limit: usize,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("bad layer range [{start}, {end}] for a graph with {layers} layers")]
    BadRange {
        start: usize,
        end: usize,
        layers: usize,
    },

    #[error("non-imaginary Lee-Yang zero: {0}")]
    NonImaginaryZero(String),

    #[error("degree mismatch: parent has {parent} zeroes, child has {child}")]
    DegreeMismatch { parent: usize, child: usize },

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("need at least {needed} replicas, got {got}")]
    InsufficientReplicas { needed: usize, got: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
