use thiserror::Error;

use crate::io::graph6::Graph6Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph order {0} exceeds the supported maximum of 64")]
    OrderTooLarge(usize),

    #[error("invalid adjacency: {0}")]
    InvalidAdjacency(String),

    #[error("reference degree {refdeg} is below the maximum degree {max_degree}")]
    RefDegreeTooSmall { refdeg: usize, max_degree: usize },

    #[error("set {0:#x} is not independent in the core graph")]
    NotIndependent(u64),

    #[error("graph is not a Ramsey graph of type (3,{t})")]
    NotRamsey { t: usize },

    #[error("invalid gluing problem: {0}")]
    InvalidProblem(String),

    #[error("pair key entry for vertex {vertex} has no partner (value {value}, limit {limit})")]
    NoPartnerKey { vertex: usize, value: usize, limit: usize },

    #[error("embedding is not an induced-subgraph map: {0}")]
    BadEmbedding(String),

    #[error("invalid census spec `{0}`")]
    BadSpec(String),

    #[error("plan line {line}: {msg}")]
    Plan { line: usize, msg: String },

    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },

    #[error(transparent)]
    Graph6(#[from] Graph6Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
