use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("cannot parse group element `{0}`")]
    ParseElement(String),
    #[error("invalid gain graph: {0}")]
    InvalidGraph(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("edge set is empty")]
    EmptyEdgeSet,
    #[error("edge set is not connected")]
    Disconnected,
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("invalid covering graph: {0}")]
    InvalidCovering(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("characterization open or unknown: {0}")]
    Uncharacterized(String),
    #[error("not implemented: {0}")]
    Unsupported(String),
    #[error("numerically indeterminate: {0}")]
    Indeterminate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
