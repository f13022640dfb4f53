use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

/// Which clause of the half-triangle definition an input violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfTriangleClause {
    NotHalfInteger,
    NotDegreeTight,
    HalfEdgesNotTriangles,
    PathStructure,
}

impl std::fmt::Display for HalfTriangleClause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HalfTriangleClause::NotHalfInteger => "not half-integer",
            HalfTriangleClause::NotDegreeTight => "not degree-tight",
            HalfTriangleClause::HalfEdgesNotTriangles => "half-edges not disjoint triangles",
            HalfTriangleClause::PathStructure => "path structure broken",
        })
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("structure violated: {0}")]
    Structure(String),
    #[error("size cap exceeded: {what} is {actual}, cap {limit}")]
    SizeCap {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("not a half-triangle solution ({clause}): {details}")]
    NotHalfTriangle {
        clause: HalfTriangleClause,
        details: String,
    },
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("weights sum to {0}, expected 1")]
    WeightSum(String),
    #[error("cannot pad edge {edge}: {details}")]
    DeficitNotCoverable { edge: EdgeId, details: String },
    #[error("pattern masses do not match: {0}")]
    PatternMassMismatch(String),
    #[error("no 1-edge lies outside every 2-edge cut")]
    NoValidP,
    #[error("no admissible 2-edge cut: {0}")]
    NoAdmissibleCut(String),
    #[error("internal invariant failed: {0}")]
    InternalInvariant(String),
    #[error("negative cost {cost} on edge {edge}")]
    NegativeCost { edge: EdgeId, cost: String },
    #[error("unknown instance: {0}")]
    UnknownInstance(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
