//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point `{0}` is not nodal")]
    NotNodal(String),
    #[error("component `{id}` cannot be contracted: {reason}")]
    NotContractible { id: String, reason: String },
    #[error("invalid fiber graph: {0}")]
    InvalidFiber(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("inconsistent index system: {0}")]
    Inconsistent(String),
    #[error("index system has {} admissible solutions on cycle {cycle:?}", roots.len())]
    NonUnique { cycle: Vec<String>, roots: Vec<String> },
    #[error("index system is under-determined: {0}")]
    UnderDetermined(String),
    #[error("germ is regular at the origin")]
    RegularGerm,
    #[error("not a genus-2 fibration germ: {0}")]
    NotCatalogGerm(String),
    #[error("series order {have} is insufficient, need at least {need}")]
    InsufficientOrder { need: usize, have: usize },
    #[error("resolution depth bound {0} exceeded")]
    DepthExceeded(usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;
