use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex}: threshold {threshold} exceeds degree {degree}")]
    ThresholdTooLarge {
        vertex: u64,
        threshold: u32,
        degree: usize,
    },

    #[error("unknown vertex id {0}")]
    UnknownVertex(u64),

    #[error("vertex index {index} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { index: usize, vertex_count: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("input set does not activate the whole graph")]
    InvalidTargetSet,

    #[error("graph has {vertex_count} vertices, exhaustive search is limited to {limit}")]
    TooLarge { vertex_count: usize, limit: usize },

    #[error("instance `{instance}`: {source}")]
    Instance {
        instance: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}
