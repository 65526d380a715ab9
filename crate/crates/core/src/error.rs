use serde::Serialize;
use thiserror::Error;

use crate::forcing::{Force, Rule};
use crate::set::VertexSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rule {0:?} is not supported by this operation")]
    InvalidRule(Rule),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Chronology(#[from] ChronologyError),

    #[error("witness rejected: {0}")]
    Witness(#[from] crate::pip::WitnessViolation),

    #[error("path bundle rejected: {0}")]
    Bundle(String),

    #[error("not a forcing set: propagation stalls with blue set {blue:?}")]
    NotForcing { blue: VertexSet },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("graph has {n} vertices, above the exhaustive cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    /// A statement the library guarantees for valid inputs failed to hold.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// First violation found while replaying a relaxed chronology.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChronologyError {
    #[error("step {step}: {force} is not a legal force")]
    IllegalForce { step: usize, force: Force },

    #[error("step {step}: vertex {dst} is forced twice")]
    DuplicateTarget { step: usize, dst: usize },

    #[error("step {step}: vertex {src} forces a second time")]
    RepeatedForcer { step: usize, src: usize },

    #[error("step {step}: rigid-linkage steps carry at most one force")]
    BatchedRlStep { step: usize },

    #[error("{} vertices remain white after the last step", white.len())]
    Incomplete { white: VertexSet },

    #[error("base vertex {vertex} is out of range for a graph on {n} vertices")]
    BaseOutOfRange { vertex: usize, n: usize },

    #[error("rule {0:?} cannot be replayed as a relaxed chronology")]
    UnsupportedRule(Rule),
}
