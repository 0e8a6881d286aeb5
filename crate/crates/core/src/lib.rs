//! Combinatorial geometry of triangle-square complexes.

pub mod catalog;
pub mod complex;
pub mod curvature;
pub mod diagram;
pub mod error;
pub mod exact;
pub mod flats;
pub mod intervals;
pub mod io;
pub mod metric;
pub mod moves;
pub mod path;

pub use complex::{
    euler_characteristic, subcomplex, validate, vertex_link, Cell, CellId, CellKind, ComplexBuilder, ComplexData, Dart,
    Edge, EdgeId, TsComplex, VertexId, VertexLink, FULL_TURN,
};
pub use curvature::{check_npc, collapse_certificate, NpcFlag, NpcVerdict};
pub use diagram::{curvature_ledger, AngledDiagram, CurvatureLedger};
pub use error::{Result, TsqError};
pub use exact::{EPoint, Point, ProductPoint, Rt3};
pub use flats::{FlatWindow, Recipe, Window};
pub use intervals::{choke_chain, gs_geodesics, interval, ChokeChain, Interval};
pub use io::Document;
pub use metric::{distance, enumerate_geodesics};
pub use moves::{straighten, MoveKind, Straightening};
pub use path::PathSeq;
