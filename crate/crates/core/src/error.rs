use thiserror::Error;

use crate::graph::VertexId;
use crate::partition::CommunityId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex `{label}` is not allowed")]
    SelfLoop { line: usize, label: String },

    #[error("line {line}: edge `{u}`-`{v}` joins two vertices of the same part")]
    SamePart { line: usize, u: String, v: String },

    #[error("edge ({0}, {1}) references a vertex outside the graph")]
    EdgeOutOfRange(usize, usize),

    #[error("vertex {0} is out of range")]
    VertexOutOfRange(VertexId),

    #[error("unknown community {0}")]
    UnknownCommunity(CommunityId),

    #[error("partition covers {got} vertices but the graph has {expected}")]
    PartitionSize { expected: usize, got: usize },

    #[error("empty graph has undefined modularity")]
    EmptyGraph,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("inconsistent correction request: {0}")]
    InconsistentCase(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
