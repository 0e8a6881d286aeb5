use thiserror::Error;

use crate::complex::{CellId, EdgeId, ValidationReport, VertexId};

#[derive(Debug, Error)]
pub enum TsqError {
    #[error("invalid complex: {0}")]
    Invalid(ValidationReport),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown cell {0}")]
    UnknownCell(CellId),
    #[error("vertex {to} is unreachable from {from}")]
    Unreachable { from: VertexId, to: VertexId },
    #[error("complex is disconnected")]
    Disconnected,
    #[error("malformed path: {0}")]
    BadPath(String),
    #[error("move does not match path at offset {0}")]
    OffsetMismatch(usize),
    #[error("path is not a geodesic: length {length}, endpoint distance {distance}")]
    NotGeodesic { length: usize, distance: u32 },
    #[error("search budget of {0} states exhausted")]
    BudgetExhausted(usize),
    #[error("enumeration cap of {0} exceeded")]
    CapOverflow(usize),
    #[error("non-planar or inconsistent rotation data: {0}")]
    NonPlanar(String),
    #[error("singular diagram: cut point at vertex {0}")]
    Singular(VertexId),
    #[error("input violates the nonpositive curvature hypothesis: {0}")]
    NotCat0(String),
    #[error("flat window error: {0}")]
    Flat(String),
    #[error("constraint contradiction: {0}")]
    Constraint(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, TsqError>;
