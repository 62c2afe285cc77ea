use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("black vertex {vertex} out of range (n_b = {n_b})")]
    BlackOutOfRange { vertex: u32, n_b: u32 },

    #[error("white vertex {vertex} out of range (n_w = {n_w})")]
    WhiteOutOfRange { vertex: u32, n_w: u32 },

    #[error("edge probability {0} is not in [0, 1]")]
    InvalidProbability(f64),

    #[error("power-law exponent must be > 1, got {0}")]
    InvalidExponent(f64),

    #[error("mean degree {mean} is infeasible with {n_w} white vertices")]
    InfeasibleMeanDegree { mean: f64, n_w: u32 },

    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),

    #[error("k must be at least 1")]
    ZeroK,

    #[error("k = {k} is out of range for {n_b} black vertices")]
    KOutOfRange { k: usize, n_b: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("worker failed on vertex {vertex}: {source}")]
    WorkerFailed {
        vertex: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("worker panicked on vertex {vertex}: {message}")]
    WorkerPanicked { vertex: u32, message: String },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("dataset {name}: declared {what} = {declared} but loaded {actual}")]
    ManifestMismatch {
        name: String,
        what: &'static str,
        declared: u64,
        actual: u64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
