//! Planar angled disc diagrams: rotation systems, the combinatorial
//! Gauss-Bonnet ledger, boundary classification and boundary moves.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{
    euler_characteristic, vertex_link, CellId, CellKind, ComplexData, Dart, TsComplex, VertexId, FULL_TURN,
};
use crate::error::{Result, TsqError};
use crate::exact::Point;
use crate::moves::{moves_at, MoveInstance, MoveKind, DEFAULT_STRIP_BOUND};
use crate::path::PathSeq;

const HALF_TURN: i64 = FULL_TURN as i64 / 2;

/// A connected planar complex with a counterclockwise rotation system whose
/// bounded faces are exactly its cells.
#[derive(Clone, Debug)]
pub struct AngledDiagram {
    complex: TsComplex,
    rotation: BTreeMap<VertexId, Vec<Dart>>,
    boundary: Vec<Dart>,
    basepoints: Option<(VertexId, VertexId)>,
}

/// Smallest rotation of a cyclic sequence, used to compare cycles.
fn canonical(cycle: &[Dart]) -> Vec<Dart> {
    (0..cycle.len())
        .map(|s| cycle[s..].iter().chain(&cycle[..s]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

impl AngledDiagram {
    pub fn new(
        complex: TsComplex,
        rotation: BTreeMap<VertexId, Vec<Dart>>,
        basepoints: Option<(VertexId, VertexId)>,
    ) -> Result<Self> {
        for &v in complex.vertices() {
            let mut have = rotation.get(&v).cloned().unwrap_or_default();
            have.sort_unstable();
            if have != complex.out_darts(v) {
                return Err(TsqError::NonPlanar(format!("rotation at v{v} does not list its darts")));
            }
        }
        if rotation.keys().any(|v| !complex.has_vertex(*v)) {
            return Err(TsqError::NonPlanar("rotation names an unknown vertex".into()));
        }
        if !complex.is_connected() {
            return Err(TsqError::NonPlanar("diagram is disconnected".into()));
        }
        if let Some((u, v)) = basepoints {
            complex.check_vertex(u)?;
            complex.check_vertex(v)?;
        }
        let mut d = AngledDiagram { complex, rotation, boundary: Vec::new(), basepoints };
        d.boundary = d.trace()?;
        Ok(d)
    }

    /// Rotation system read off exact vertex coordinates.
    pub fn from_coords(
        complex: TsComplex,
        coords: &HashMap<VertexId, Point>,
        basepoints: Option<(VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut rotation = BTreeMap::new();
        for &v in complex.vertices() {
            let p = *coords.get(&v).ok_or_else(|| TsqError::NonPlanar(format!("no coordinates for v{v}")))?;
            let mut darts = Vec::new();
            for &d in complex.out_darts(v) {
                let q = *coords
                    .get(&complex.head(d))
                    .ok_or_else(|| TsqError::NonPlanar(format!("no coordinates for v{}", complex.head(d))))?;
                let class = (q - p)
                    .direction()
                    .ok_or_else(|| TsqError::NonPlanar(format!("edge {} is not a unit vector", d.edge)))?;
                darts.push((class, d));
            }
            darts.sort_unstable();
            rotation.insert(v, darts.into_iter().map(|(_, d)| d).collect());
        }
        AngledDiagram::new(complex, rotation, basepoints)
    }

    fn trace(&self) -> Result<Vec<Dart>> {
        let k = &self.complex;
        if k.edges().is_empty() {
            return Ok(Vec::new());
        }
        let mut slot: HashMap<Dart, (VertexId, usize)> = HashMap::new();
        for (&v, darts) in &self.rotation {
            for (i, &d) in darts.iter().enumerate() {
                slot.insert(d, (v, i));
            }
        }
        // The face to the left of `d` continues with the dart just clockwise
        // of the reverse of `d`.
        let next = |d: Dart| -> Dart {
            let (w, i) = slot[&d.rev()];
            let ring = &self.rotation[&w];
            ring[(i + ring.len() - 1) % ring.len()]
        };
        let mut seen = HashSet::new();
        let mut faces: Vec<Vec<Dart>> = Vec::new();
        for darts in self.rotation.values() {
            for &start in darts {
                if seen.contains(&start) {
                    continue;
                }
                let mut face = Vec::new();
                let mut d = start;
                while seen.insert(d) {
                    face.push(d);
                    d = next(d);
                }
                faces.push(face);
            }
        }
        let v = k.num_vertices() as i64;
        let e = k.edges().len() as i64;
        if v - e + faces.len() as i64 != 2 {
            return Err(TsqError::NonPlanar(format!("{} faces do not give a sphere", faces.len())));
        }
        let mut cell_cycles: HashMap<Vec<Dart>, CellId> = HashMap::new();
        for c in k.cells() {
            let rev: Vec<Dart> = c.boundary.iter().rev().map(|d| d.rev()).collect();
            cell_cycles.insert(canonical(&c.boundary), c.id);
            cell_cycles.insert(canonical(&rev), c.id);
        }
        let mut matched = BTreeSet::new();
        let mut outer = Vec::new();
        for f in faces {
            match cell_cycles.get(&canonical(&f)) {
                Some(&c) if matched.insert(c) => {}
                _ => outer.push(f),
            }
        }
        if matched.len() != k.cells().len() || outer.len() != 1 {
            return Err(TsqError::NonPlanar(format!("expected one outer face, found {}", outer.len())));
        }
        Ok(outer.pop().unwrap())
    }

    pub fn complex(&self) -> &TsComplex {
        &self.complex
    }

    pub fn rotation(&self) -> &BTreeMap<VertexId, Vec<Dart>> {
        &self.rotation
    }

    /// Outer boundary cycle, clockwise.
    pub fn boundary(&self) -> &[Dart] {
        &self.boundary
    }

    pub fn boundary_vertices(&self) -> Vec<VertexId> {
        if self.boundary.is_empty() {
            return self.complex.vertices().to_vec();
        }
        self.boundary.iter().map(|&d| self.complex.tail(d)).collect()
    }

    pub fn basepoints(&self) -> Option<(VertexId, VertexId)> {
        self.basepoints
    }

    pub fn with_basepoints(mut self, u: VertexId, v: VertexId) -> Result<Self> {
        self.complex.check_vertex(u)?;
        self.complex.check_vertex(v)?;
        self.basepoints = Some((u, v));
        Ok(self)
    }

    /// First cut point or cell-free edge, if any.
    pub fn singularity(&self) -> Option<VertexId> {
        let k = &self.complex;
        if k.cells().is_empty() {
            return Some(k.vertices()[0]);
        }
        let mut seen = HashSet::new();
        for v in self.boundary_vertices() {
            if !seen.insert(v) {
                return Some(v);
            }
        }
        k.edges().iter().find(|e| k.cells_on_edge(e.id).is_empty()).map(|e| e.ends[0])
    }

    pub fn is_nonsingular(&self) -> bool {
        self.singularity().is_none()
    }

    /// The clockwise arc from `u` to `v` and the counterclockwise one.
    pub fn sides(&self) -> Result<(PathSeq, PathSeq)> {
        let (u, v) = self.basepoints.ok_or_else(|| TsqError::BadPath("diagram has no basepoints".into()))?;
        let verts = self.boundary_vertices();
        let pos = |x: VertexId| {
            verts.iter().position(|&w| w == x).ok_or_else(|| TsqError::BadPath(format!("v{x} is not on the boundary")))
        };
        let (pu, pv) = (pos(u)?, pos(v)?);
        let n = self.boundary.len();
        let arc = |from: usize, to: usize| -> Vec<Dart> {
            let len = (to + n - from) % n;
            (0..len).map(|i| self.boundary[(from + i) % n]).collect()
        };
        let k = &self.complex;
        let old = PathSeq::from_darts(k, u, arc(pu, pv))?;
        let new = PathSeq::from_darts(k, v, arc(pv, pu))?.reversed();
        Ok((old, new))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Place {
    Interior,
    Boundary,
    CutPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCurvature {
    pub vertex: VertexId,
    pub place: Place,
    pub angle_sum: u32,
    pub curvature: i64,
}

/// Curvatures in π/6 units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureLedger {
    pub vertices: Vec<VertexCurvature>,
    pub cells: Vec<(CellId, i64)>,
    pub total: i64,
    pub euler: i64,
    pub boundary_total: i64,
    pub interior_total: i64,
    pub identity_holds: bool,
}

/// Vertex curvature is a full turn, less a half turn per unit of link Euler
/// characteristic, less the angle sum; cells of unit polygons are flat.
pub fn curvature_ledger(d: &AngledDiagram) -> CurvatureLedger {
    let k = &d.complex;
    let mut on_boundary: HashMap<VertexId, usize> = HashMap::new();
    for v in d.boundary_vertices() {
        *on_boundary.entry(v).or_default() += 1;
    }
    let mut vertices = Vec::new();
    for &v in k.vertices() {
        let link = vertex_link(k, v).expect("vertex exists");
        let link_chi = link.nodes.len() as i64 - link.edges.len() as i64;
        let angle_sum = k.angle_sum(v);
        let curvature = FULL_TURN as i64 - HALF_TURN * link_chi - angle_sum as i64;
        let place = match on_boundary.get(&v) {
            None => Place::Interior,
            Some(1) => Place::Boundary,
            Some(_) => Place::CutPoint,
        };
        vertices.push(VertexCurvature { vertex: v, place, angle_sum, curvature });
    }
    let cells: Vec<(CellId, i64)> = k
        .cells()
        .iter()
        .map(|c| {
            let n = c.boundary.len() as i64;
            (c.id, (n * c.kind.angle() as i64) - (n - 2) * HALF_TURN)
        })
        .collect();
    let vsum: i64 = vertices.iter().map(|v| v.curvature).sum();
    let total = vsum + cells.iter().map(|c| c.1).sum::<i64>();
    let interior_total = vertices.iter().filter(|v| v.place == Place::Interior).map(|v| v.curvature).sum();
    let euler = euler_characteristic(k);
    CurvatureLedger {
        vertices,
        cells,
        total,
        euler,
        boundary_total: vsum - interior_total,
        interior_total,
        identity_holds: total == FULL_TURN as i64 * euler,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryVertex {
    pub vertex: VertexId,
    pub curvature: i64,
    pub transition: bool,
    pub exposed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryPath {
    pub kind: CellKind,
    /// Boundary position of the first vertex.
    pub start: usize,
    pub vertices: Vec<VertexId>,
    pub cumulative: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryClasses {
    pub vertices: Vec<BoundaryVertex>,
    pub paths: Vec<BoundaryPath>,
    pub exposed: Vec<VertexId>,
}

impl BoundaryClasses {
    pub fn triangle_paths(&self) -> impl Iterator<Item = &BoundaryPath> {
        self.paths.iter().filter(|p| p.kind == CellKind::Triangle)
    }

    pub fn square_paths(&self) -> impl Iterator<Item = &BoundaryPath> {
        self.paths.iter().filter(|p| p.kind == CellKind::Square)
    }
}

/// Splits the boundary into maximal triangle and square edge paths.
pub fn classify_boundary(d: &AngledDiagram) -> Result<BoundaryClasses> {
    if let Some(v) = d.singularity() {
        return Err(TsqError::Singular(v));
    }
    let k = &d.complex;
    let ledger = curvature_ledger(d);
    let curv: HashMap<VertexId, i64> = ledger.vertices.iter().map(|v| (v.vertex, v.curvature)).collect();
    let n = d.boundary.len();
    let kinds: Vec<CellKind> = d
        .boundary
        .iter()
        .map(|e| k.cell(k.cells_on_edge(e.edge)[0].0).unwrap().kind)
        .collect();
    let verts = d.boundary_vertices();
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let transition = kinds[(i + n - 1) % n] != kinds[i];
        let curvature = curv[&verts[i]];
        vertices.push(BoundaryVertex { vertex: verts[i], curvature, transition, exposed: curvature > 0 && !transition });
    }
    let starts: Vec<usize> = (0..n).filter(|&i| vertices[i].transition).collect();
    let mut paths = Vec::new();
    if starts.is_empty() {
        paths.push(BoundaryPath {
            kind: kinds[0],
            start: 0,
            vertices: verts.clone(),
            cumulative: vertices.iter().map(|v| v.curvature).sum(),
        });
    } else {
        for (j, &s) in starts.iter().enumerate() {
            let e = starts[(j + 1) % starts.len()];
            let len = (e + n - s) % n;
            let len = if len == 0 { n } else { len };
            let idx: Vec<usize> = (0..=len).map(|t| (s + t) % n).collect();
            paths.push(BoundaryPath {
                kind: kinds[s],
                start: s,
                vertices: idx.iter().map(|&i| verts[i]).collect(),
                cumulative: idx.iter().map(|&i| vertices[i].curvature).sum(),
            });
        }
    }
    let exposed = vertices.iter().filter(|v| v.exposed).map(|v| v.vertex).collect();
    Ok(BoundaryClasses { vertices, paths, exposed })
}

/// Index of `needle` as a consecutive run inside `hay`.
fn find_run(hay: &[VertexId], needle: &[VertexId]) -> Option<usize> {
    hay.windows(needle.len()).position(|w| w == needle)
}

/// A move on one side of a doubly-based nonsingular diagram that avoids the
/// basepoints: at an exposed vertex if there is one, otherwise across a
/// positively curved square path.
pub fn find_boundary_move(d: &AngledDiagram) -> Result<MoveInstance> {
    let (u, v) = d.basepoints.ok_or_else(|| TsqError::BadPath("diagram has no basepoints".into()))?;
    let classes = classify_boundary(d)?;
    let (old, new) = d.sides()?;
    let k = &d.complex;
    for w in classes.exposed.iter().copied().filter(|&w| w != u && w != v) {
        for side in [&old, &new] {
            let Some(t) = side.vertices.iter().position(|&x| x == w) else { continue };
            if t == 0 || t == side.len() {
                continue;
            }
            let mut found = Vec::new();
            moves_at(k, side, t - 1, DEFAULT_STRIP_BOUND, &mut found);
            if let Some(m) = found.into_iter().find(|m| m.old.len() == 2 && m.kind != MoveKind::Trivial) {
                return Ok(m);
            }
        }
    }
    let n = d.boundary.len();
    let verts = d.boundary_vertices();
    for path in classes.square_paths() {
        if path.cumulative <= 0 || path.vertices.iter().any(|&x| x == u || x == v) {
            continue;
        }
        let len = path.vertices.len() - 1;
        let ext: Vec<VertexId> = (0..len + 3).map(|t| verts[(path.start + n + t - 1) % n]).collect();
        let rev: Vec<VertexId> = ext.iter().rev().copied().collect();
        for side in [&old, &new] {
            for run in [&ext, &rev] {
                let Some(off) = find_run(&side.vertices, run) else { continue };
                let mut found = Vec::new();
                moves_at(k, side, off, DEFAULT_STRIP_BOUND, &mut found);
                if let Some(m) = found.into_iter().find(|m| {
                    m.old.len() == len + 2
                        && matches!(m.kind, MoveKind::TriangleTriangle | MoveKind::TriangleSquareTriangle { .. })
                }) {
                    return Ok(m);
                }
            }
        }
    }
    Err(TsqError::NotCat0("no boundary move avoids the basepoints".into()))
}

/// The subcomplex made of the given cells and their faces; ids are kept.
pub fn cells_subcomplex(k: &TsComplex, cells: &[CellId]) -> Result<TsComplex> {
    let keep: BTreeSet<CellId> = cells.iter().copied().collect();
    let cells: Vec<_> = k.cells().iter().filter(|c| keep.contains(&c.id)).cloned().collect();
    let edge_ids: BTreeSet<_> = cells.iter().flat_map(|c| c.boundary.iter().map(|d| d.edge)).collect();
    let edges: Vec<_> = k.edges().iter().filter(|e| edge_ids.contains(&e.id)).cloned().collect();
    let vertices: BTreeSet<_> = edges.iter().flat_map(|e| e.ends).collect();
    TsComplex::new(ComplexData { vertices: vertices.into_iter().collect(), edges, cells })
}

/// Grows a random edge-connected cluster of about `size` cells inside a
/// laid-out complex and returns it as a diagram, or `None` when the cluster
/// encloses a hole.
pub fn random_disc<R: Rng>(
    k: &TsComplex,
    coords: &HashMap<VertexId, Point>,
    size: usize,
    rng: &mut R,
) -> Option<AngledDiagram> {
    let all = k.cells();
    if all.is_empty() {
        return None;
    }
    let mut chosen: BTreeSet<CellId> = BTreeSet::new();
    chosen.insert(all.choose(rng)?.id);
    while chosen.len() < size {
        let frontier: BTreeSet<CellId> = chosen
            .iter()
            .flat_map(|&c| k.cell(c).unwrap().boundary.iter().map(|d| d.edge))
            .flat_map(|e| k.cells_on_edge(e).iter().map(|&(c, _)| c))
            .filter(|c| !chosen.contains(c))
            .collect();
        let frontier: Vec<CellId> = frontier.into_iter().collect();
        let Some(&c) = frontier.choose(rng) else { break };
        chosen.insert(c);
    }
    let sub = cells_subcomplex(k, &chosen.into_iter().collect::<Vec<_>>()).ok()?;
    AngledDiagram::from_coords(sub, coords, None).ok()
}
