use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hidden_topk::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("records are not comparable: {0}")]
    Incompatible(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl BenchError {
    /// 1 usage, 2 data, 3 invariant.
    pub fn exit_code(&self) -> u8 {
        match self {
            BenchError::Usage(_) => 1,
            BenchError::Core(e) => match e {
                hidden_topk::Error::ZeroK
                | hidden_topk::Error::InvalidConfig(_)
                | hidden_topk::Error::InvalidProbability(_)
                | hidden_topk::Error::InvalidExponent(_)
                | hidden_topk::Error::InfeasibleMeanDegree { .. } => 1,
                _ => 2,
            },
            BenchError::Io { .. } | BenchError::Format { .. } | BenchError::Incompatible(_) => 2,
            BenchError::Invariant(_) => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| BenchError::Io { path, source }
    }

    pub(crate) fn format(path: impl Into<PathBuf>) -> impl FnOnce(String) -> Self {
        let path = path.into();
        move |message| BenchError::Format { path, message }
    }
}
