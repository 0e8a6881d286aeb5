//! Triangle-square complexes: darts, corners, vertex links and full subcomplexes.
//!
//! Edges are undirected records. A [`Dart`] is an edge together with a
//! traversal direction, so a loop edge contributes two distinct darts at its
//! vertex. Cell boundaries are closed cycles of darts and may reuse an edge
//! (Δ-complex identifications are allowed).
//!
//! Angles are integers in units of π/6: a triangle corner is 2, a square
//! corner is 3 and a full turn is [`FULL_TURN`].

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Result, TsqError};

pub type VertexId = u32;
pub type EdgeId = u32;
pub type CellId = u32;

/// 2π in π/6 units.
pub const FULL_TURN: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart {
    pub edge: EdgeId,
    pub reversed: bool,
}

impl Dart {
    pub fn new(edge: EdgeId, reversed: bool) -> Self {
        Self { edge, reversed }
    }

    pub fn rev(self) -> Self {
        Self { edge: self.edge, reversed: !self.reversed }
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reversed {
            write!(f, "e{}'", self.edge)
        } else {
            write!(f, "e{}", self.edge)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellKind {
    Triangle,
    Square,
}

impl CellKind {
    /// Corner angle in π/6 units.
    pub fn angle(self) -> u32 {
        match self {
            CellKind::Triangle => 2,
            CellKind::Square => 3,
        }
    }

    pub fn sides(self) -> usize {
        match self {
            CellKind::Triangle => 3,
            CellKind::Square => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: [VertexId; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: CellId,
    pub kind: CellKind,
    pub boundary: Vec<Dart>,
}

/// Unvalidated complex as read from the interchange format.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexData {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueKind {
    DuplicateVertex,
    DuplicateEdge,
    DuplicateCell,
    UnknownEndpoint,
    UnknownEdge,
    BoundaryLength,
    BrokenBoundary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub kind: IssueKind,
    pub id: u32,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, kind: IssueKind, id: u32, message: impl Into<String>) {
        self.issues.push(Issue { kind, id, message: message.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<_> = self.issues.iter().map(|i| format!("{} {}: {}", kind_name(i.kind), i.id, i.message)).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

fn kind_name(kind: IssueKind) -> &'static str {
    match kind {
        IssueKind::DuplicateVertex | IssueKind::UnknownEndpoint => "vertex",
        IssueKind::DuplicateEdge | IssueKind::UnknownEdge => "edge",
        _ => "cell",
    }
}

/// Checks every structural invariant and reports all violations.
pub fn validate(data: &ComplexData) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut verts = HashSet::new();
    for &v in &data.vertices {
        if !verts.insert(v) {
            report.push(IssueKind::DuplicateVertex, v, "duplicate vertex id");
        }
    }
    let mut ends = HashMap::new();
    for e in &data.edges {
        if ends.insert(e.id, e.ends).is_some() {
            report.push(IssueKind::DuplicateEdge, e.id, "duplicate edge id");
        }
        for v in e.ends {
            if !verts.contains(&v) {
                report.push(IssueKind::UnknownEndpoint, e.id, format!("endpoint {v} does not exist"));
            }
        }
    }
    let mut cells = HashSet::new();
    for c in &data.cells {
        if !cells.insert(c.id) {
            report.push(IssueKind::DuplicateCell, c.id, "duplicate cell id");
        }
        if c.boundary.len() != c.kind.sides() {
            report.push(
                IssueKind::BoundaryLength,
                c.id,
                format!("boundary length {} for a {:?}", c.boundary.len(), c.kind),
            );
        }
        let mut known = true;
        for d in &c.boundary {
            if !ends.contains_key(&d.edge) {
                report.push(IssueKind::UnknownEdge, c.id, format!("boundary names unknown edge {}", d.edge));
                known = false;
            }
        }
        if !known || c.boundary.is_empty() {
            continue;
        }
        let endpoints = |d: &Dart| {
            let [a, b] = ends[&d.edge];
            if d.reversed {
                (b, a)
            } else {
                (a, b)
            }
        };
        let n = c.boundary.len();
        for i in 0..n {
            let (_, head) = endpoints(&c.boundary[i]);
            let (tail, _) = endpoints(&c.boundary[(i + 1) % n]);
            if head != tail {
                report.push(
                    IssueKind::BrokenBoundary,
                    c.id,
                    format!("dart {} does not meet dart {} head to tail", c.boundary[i], c.boundary[(i + 1) % n]),
                );
            }
        }
    }
    report
}

/// A corner of a cell: the angle a cell subtends at one of its boundary vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub cell: CellId,
    pub position: usize,
    pub vertex: VertexId,
    /// The two darts leaving `vertex` along the cell boundary: the reverse of
    /// the incoming boundary dart, then the outgoing boundary dart.
    pub darts: (Dart, Dart),
    pub angle: u32,
}

/// Validated, indexed, immutable triangle-square complex.
#[derive(Clone, Debug)]
pub struct TsComplex {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    cells: Vec<Cell>,
    vidx: HashMap<VertexId, usize>,
    eidx: HashMap<EdgeId, usize>,
    cidx: HashMap<CellId, usize>,
    out: Vec<Vec<Dart>>,
    heads: Vec<Vec<usize>>,
    corners: Vec<Vec<Corner>>,
    edge_cells: Vec<Vec<(CellId, usize)>>,
}

impl TsComplex {
    pub fn new(mut data: ComplexData) -> Result<Self> {
        let report = validate(&data);
        if !report.is_valid() {
            return Err(TsqError::Invalid(report));
        }
        data.vertices.sort_unstable();
        data.edges.sort_by_key(|e| e.id);
        data.cells.sort_by_key(|c| c.id);
        let vidx: HashMap<_, _> = data.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let eidx: HashMap<_, _> = data.edges.iter().enumerate().map(|(i, e)| (e.id, i)).collect();
        let cidx: HashMap<_, _> = data.cells.iter().enumerate().map(|(i, c)| (c.id, i)).collect();
        let mut out = vec![Vec::new(); data.vertices.len()];
        for e in &data.edges {
            out[vidx[&e.ends[0]]].push(Dart::new(e.id, false));
            out[vidx[&e.ends[1]]].push(Dart::new(e.id, true));
        }
        for darts in &mut out {
            darts.sort_unstable();
        }
        let mut k = TsComplex {
            vertices: data.vertices,
            edges: data.edges,
            cells: data.cells,
            vidx,
            eidx,
            cidx,
            out,
            heads: Vec::new(),
            corners: Vec::new(),
            edge_cells: Vec::new(),
        };
        let mut corners = vec![Vec::new(); k.vertices.len()];
        let mut edge_cells = vec![Vec::new(); k.edges.len()];
        for c in &k.cells {
            let n = c.boundary.len();
            for i in 0..n {
                let incoming = c.boundary[(i + n - 1) % n];
                let outgoing = c.boundary[i];
                let v = k.tail(outgoing);
                corners[k.vidx[&v]].push(Corner {
                    cell: c.id,
                    position: i,
                    vertex: v,
                    darts: (incoming.rev(), outgoing),
                    angle: c.kind.angle(),
                });
                edge_cells[k.eidx[&outgoing.edge]].push((c.id, i));
            }
        }
        k.heads = k.out.iter().map(|ds| ds.iter().map(|&d| k.vidx[&k.head(d)]).collect()).collect();
        k.corners = corners;
        k.edge_cells = edge_cells;
        Ok(k)
    }

    pub fn to_data(&self) -> ComplexData {
        ComplexData { vertices: self.vertices.clone(), edges: self.edges.clone(), cells: self.cells.clone() }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vidx.get(&v).copied()
    }

    pub fn vertex_at(&self, idx: usize) -> VertexId {
        self.vertices[idx]
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<usize> {
        self.vertex_index(v).ok_or(TsqError::UnknownVertex(v))
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vidx.contains_key(&v)
    }

    pub fn edge(&self, e: EdgeId) -> Option<&Edge> {
        self.eidx.get(&e).map(|&i| &self.edges[i])
    }

    pub fn cell(&self, c: CellId) -> Option<&Cell> {
        self.cidx.get(&c).map(|&i| &self.cells[i])
    }

    pub fn has_dart(&self, d: Dart) -> bool {
        self.eidx.contains_key(&d.edge)
    }

    pub fn tail(&self, d: Dart) -> VertexId {
        let e = &self.edges[self.eidx[&d.edge]];
        if d.reversed {
            e.ends[1]
        } else {
            e.ends[0]
        }
    }

    pub fn head(&self, d: Dart) -> VertexId {
        self.tail(d.rev())
    }

    /// Darts leaving `v`, sorted. Loops appear twice.
    pub fn out_darts(&self, v: VertexId) -> &[Dart] {
        &self.out[self.vidx[&v]]
    }

    pub fn out_darts_at(&self, idx: usize) -> &[Dart] {
        &self.out[idx]
    }

    /// Vertex indices of the heads of `out_darts_at(idx)`, in the same order.
    pub fn heads_at(&self, idx: usize) -> &[usize] {
        &self.heads[idx]
    }

    pub fn corners_at(&self, v: VertexId) -> &[Corner] {
        &self.corners[self.vidx[&v]]
    }

    /// Occurrences `(cell, position)` of an edge in cell boundaries.
    pub fn cells_on_edge(&self, e: EdgeId) -> &[(CellId, usize)] {
        &self.edge_cells[self.eidx[&e]]
    }

    pub fn angle_sum(&self, v: VertexId) -> u32 {
        self.corners_at(v).iter().map(|c| c.angle).sum()
    }

    /// Sorted vertex ids of a cell boundary with repetition removed.
    pub fn cell_vertices(&self, c: &Cell) -> Vec<VertexId> {
        let set: BTreeSet<_> = c.boundary.iter().map(|&d| self.tail(d)).collect();
        set.into_iter().collect()
    }

    /// Boundary vertices of a cell in boundary order.
    pub fn cell_cycle(&self, c: &Cell) -> Vec<VertexId> {
        c.boundary.iter().map(|&d| self.tail(d)).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &d in &self.out[i] {
                let j = self.vidx[&self.head(d)];
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == self.vertices.len()
    }
}

/// V − E + F.
pub fn euler_characteristic(k: &TsComplex) -> i64 {
    k.vertices.len() as i64 - k.edges.len() as i64 + k.cells.len() as i64
}

/// The full subcomplex on `subset`: every edge with both ends in the set and
/// every cell with all boundary vertices in the set. Ids are preserved.
pub fn subcomplex(k: &TsComplex, subset: &[VertexId]) -> Result<TsComplex> {
    let mut keep = HashSet::with_capacity(subset.len());
    for &v in subset {
        k.check_vertex(v)?;
        keep.insert(v);
    }
    let edges: Vec<Edge> = k.edges.iter().filter(|e| e.ends.iter().all(|v| keep.contains(v))).cloned().collect();
    let cells: Vec<Cell> = k
        .cells
        .iter()
        .filter(|c| c.boundary.iter().all(|&d| keep.contains(&k.tail(d))))
        .cloned()
        .collect();
    let mut vertices: Vec<_> = keep.into_iter().collect();
    vertices.sort_unstable();
    TsComplex::new(ComplexData { vertices, edges, cells })
}

/// One weighted edge of a vertex link: a corner joining two dart-nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkEdge {
    pub a: usize,
    pub b: usize,
    pub weight: u32,
    pub corner: Corner,
}

/// The link of a vertex as a metric multigraph: one node per dart leaving the
/// vertex, one edge per corner, weights in π/6 units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLink {
    pub vertex: VertexId,
    pub nodes: Vec<Dart>,
    pub edges: Vec<LinkEdge>,
}

impl VertexLink {
    pub fn node_of(&self, d: Dart) -> Option<usize> {
        self.nodes.binary_search(&d).ok()
    }

    pub fn total_weight(&self) -> u32 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

pub fn vertex_link(k: &TsComplex, v: VertexId) -> Result<VertexLink> {
    let idx = k.check_vertex(v)?;
    let nodes = k.out[idx].clone();
    let edges = k.corners[idx]
        .iter()
        .map(|c| LinkEdge {
            a: nodes.binary_search(&c.darts.0).expect("corner dart leaves vertex"),
            b: nodes.binary_search(&c.darts.1).expect("corner dart leaves vertex"),
            weight: c.angle,
            corner: *c,
        })
        .collect();
    Ok(VertexLink { vertex: v, nodes, edges })
}

/// Builds complexes from vertex cycles, creating one edge per unordered
/// vertex pair. Good for complexes without multi-edges or loops.
#[derive(Clone, Debug, Default)]
pub struct ComplexBuilder {
    vertices: BTreeSet<VertexId>,
    edges: Vec<Edge>,
    by_pair: HashMap<(VertexId, VertexId), EdgeId>,
    cells: Vec<Cell>,
}

impl ComplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, v: VertexId) -> &mut Self {
        self.vertices.insert(v);
        self
    }

    /// Returns the dart from `a` to `b`, creating the edge if needed.
    pub fn dart(&mut self, a: VertexId, b: VertexId) -> Dart {
        self.vertices.insert(a);
        self.vertices.insert(b);
        let key = (a.min(b), a.max(b));
        let id = match self.by_pair.get(&key) {
            Some(&id) => id,
            None => {
                let id = self.edges.len() as EdgeId;
                self.edges.push(Edge { id, ends: [key.0, key.1] });
                self.by_pair.insert(key, id);
                id
            }
        };
        Dart::new(id, a > b)
    }

    pub fn edge(&mut self, a: VertexId, b: VertexId) -> &mut Self {
        self.dart(a, b);
        self
    }

    pub fn cell(&mut self, kind: CellKind, cycle: &[VertexId]) -> CellId {
        let n = cycle.len();
        let boundary = (0..n).map(|i| self.dart(cycle[i], cycle[(i + 1) % n])).collect();
        let id = self.cells.len() as CellId;
        self.cells.push(Cell { id, kind, boundary });
        id
    }

    pub fn triangle(&mut self, a: VertexId, b: VertexId, c: VertexId) -> CellId {
        self.cell(CellKind::Triangle, &[a, b, c])
    }

    pub fn square(&mut self, a: VertexId, b: VertexId, c: VertexId, d: VertexId) -> CellId {
        self.cell(CellKind::Square, &[a, b, c, d])
    }

    pub fn data(&self) -> ComplexData {
        ComplexData {
            vertices: self.vertices.iter().copied().collect(),
            edges: self.edges.clone(),
            cells: self.cells.clone(),
        }
    }

    pub fn build(&self) -> Result<TsComplex> {
        TsComplex::new(self.data())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn single_square_is_valid() {
        let k = catalog::single_square();
        assert!(validate(&k.to_data()).is_valid());
        assert_eq!(euler_characteristic(&k), 1);
    }

    #[test]
    fn short_square_boundary_is_reported() {
        let mut data = catalog::single_square().to_data();
        data.cells[0].boundary.pop();
        let report = validate(&data);
        assert!(report.issues.iter().any(|i| i.kind == IssueKind::BoundaryLength));
        assert!(report.to_string().contains("boundary length"));
        assert!(matches!(TsComplex::new(data), Err(TsqError::Invalid(_))));
    }

    #[test]
    fn broken_cycle_and_unknown_edge() {
        let mut data = catalog::single_square().to_data();
        data.cells[0].boundary[1] = data.cells[0].boundary[1].rev();
        let report = validate(&data);
        assert!(report.issues.iter().any(|i| i.kind == IssueKind::BrokenBoundary));
        data.cells[0].boundary[1] = Dart::new(99, false);
        let report = validate(&data);
        assert!(report.issues.iter().any(|i| i.kind == IssueKind::UnknownEdge && i.id == 0));
    }

    #[test]
    fn square_torus_closes() {
        let k = catalog::square_torus();
        assert_eq!((k.num_vertices(), k.edges().len(), k.cells().len()), (1, 2, 1));
        assert_eq!(euler_characteristic(&k), 0);
        let link = vertex_link(&k, 0).unwrap();
        assert_eq!(link.nodes.len(), 4);
        assert_eq!(link.edges.len(), 4);
        assert_eq!(link.total_weight(), 12);
    }

    #[test]
    fn grid_counts_and_links() {
        let k = catalog::square_grid(2, 2);
        assert_eq!(euler_characteristic(&k), 9 - 12 + 4);
        let center = catalog::grid_vertex(2, 1, 1);
        let link = vertex_link(&k, center).unwrap();
        assert_eq!(link.nodes.len(), 4);
        assert_eq!(link.total_weight(), 12);
        assert!(link.edges.iter().all(|e| e.weight == 3));
        let hex = catalog::hexagon();
        let link = vertex_link(&hex, 0).unwrap();
        assert_eq!((link.nodes.len(), link.edges.len(), link.total_weight()), (6, 6, 12));
    }

    #[test]
    fn unknown_vertex_link() {
        assert!(matches!(vertex_link(&catalog::single_square(), 42), Err(TsqError::UnknownVertex(42))));
    }

    #[test]
    fn subcomplex_examples() {
        let k = catalog::single_square();
        let full = subcomplex(&k, k.vertices()).unwrap();
        assert_eq!(full.to_data(), k.to_data());
        let opposite = subcomplex(&k, &[0, 2]).unwrap();
        assert_eq!((opposite.num_vertices(), opposite.edges().len(), opposite.cells().len()), (2, 0, 0));
        let three = subcomplex(&k, &[0, 1, 2]).unwrap();
        assert_eq!((three.edges().len(), three.cells().len()), (2, 0));
        assert!(subcomplex(&k, &[7]).is_err());
    }
}
