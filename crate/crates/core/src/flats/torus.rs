//! Flat tori: building them from a fundamental domain and developing them
//! into the plane.

use std::collections::{BTreeMap, HashSet, VecDeque};

use super::generate::{assemble, is_interior};
use super::{FlatWindow, Window};
use crate::complex::{CellId, CellKind, ComplexData, Dart, Edge, TsComplex, VertexId};
use crate::error::{Result, TsqError};
use crate::exact::{Point, Rt3, Sqrt3};
use crate::{euler_characteristic, Cell};

/// Integer coordinates of `d` in the basis `t1, t2`, if it is a lattice vector.
pub fn lattice_coords(d: Point, t1: Point, t2: Point) -> Option<(i64, i64)> {
    let det = t1.cross4(t2);
    let a = divide(d.cross4(t2), det)?;
    let b = divide(t1.cross4(d), det)?;
    Some((a, b))
}

/// `x / y` when it is a rational integer.
fn divide(x: Sqrt3, y: Sqrt3) -> Option<i64> {
    let n = y.p * y.p - 3 * y.q * y.q;
    if n == 0 {
        return None;
    }
    let irr = x.q * y.p - x.p * y.q;
    let rat = x.p * y.p - 3 * x.q * y.q;
    (irr == 0 && rat % n == 0).then(|| (rat / n) as i64)
}

/// Four times the area of a unit polygon.
fn area4(kind: CellKind) -> Sqrt3 {
    match kind {
        CellKind::Triangle => Sqrt3::new(0, 1),
        CellKind::Square => Sqrt3::new(4, 0),
    }
}

/// Quotients placed polygons by the lattice spanned by `t1, t2`.
#[derive(Clone, Debug)]
pub struct TorusBuilder {
    t1: Point,
    t2: Point,
    reps: Vec<Point>,
    edges: BTreeMap<(VertexId, Point), Edge>,
    cells: Vec<Cell>,
}

impl TorusBuilder {
    pub fn new(t1: Point, t2: Point) -> Result<Self> {
        if t1.cross4(t2).signum() == 0 {
            return Err(TsqError::Flat("translations are parallel".into()));
        }
        Ok(TorusBuilder { t1, t2, reps: Vec::new(), edges: BTreeMap::new(), cells: Vec::new() })
    }

    fn class(&mut self, p: Point) -> VertexId {
        if let Some(i) = self.reps.iter().position(|&r| lattice_coords(p - r, self.t1, self.t2).is_some()) {
            return i as VertexId;
        }
        self.reps.push(p);
        (self.reps.len() - 1) as VertexId
    }

    fn dart(&mut self, p: Point, q: Point) -> Dart {
        let (a, b) = (self.class(p), self.class(q));
        let fwd = (a, q - p);
        let bwd = (b, p - q);
        let key = fwd.min(bwd);
        let next = self.edges.len() as u32;
        let ends = if key == fwd { [a, b] } else { [b, a] };
        let e = self.edges.entry(key).or_insert(Edge { id: next, ends });
        Dart::new(e.id, key != fwd)
    }

    /// Adds a polygon given by its counterclockwise corners.
    pub fn cell(&mut self, kind: CellKind, corners: &[Point]) -> CellId {
        let n = corners.len();
        let boundary = (0..n).map(|i| self.dart(corners[i], corners[(i + 1) % n])).collect();
        let id = self.cells.len() as CellId;
        self.cells.push(Cell { id, kind, boundary });
        id
    }

    pub fn build(&self) -> Result<TsComplex> {
        let mut edges: Vec<Edge> = self.edges.values().cloned().collect();
        edges.sort_by_key(|e| e.id);
        let vertices = (0..self.reps.len() as VertexId).collect();
        TsComplex::new(ComplexData { vertices, edges, cells: self.cells.clone() })
    }
}

/// The snub square tiling modulo its translation lattice: four vertices,
/// two squares and four triangles.
pub fn snub_torus() -> TsComplex {
    let p = |xa, xb, ya, yb| Point::new(Rt3::new(xa, xb), Rt3::new(ya, yb));
    let (o, e, f, n) = (p(0, 0, 0, 0), p(2, 0, 0, 0), p(2, 0, 2, 0), p(0, 0, 2, 0));
    let r = p(2, 1, 1, 0);
    let rr = p(3, 1, 1, 1);
    let t = p(3, 0, 2, 1);
    let tl = p(1, 0, 2, 1);
    let l = p(0, -1, 1, 0);
    let mut b = TorusBuilder::new(p(2, 1, -1, 0), p(1, 0, 2, 1)).unwrap();
    use CellKind::*;
    b.cell(Square, &[o, e, f, n]);
    b.cell(Square, &[f, r, rr, t]);
    b.cell(Triangle, &[n, f, tl]);
    b.cell(Triangle, &[e, r, f]);
    b.cell(Triangle, &[f, t, tl]);
    b.cell(Triangle, &[o, n, l]);
    b.build().expect("snub torus is well formed")
}

/// One placed copy of a cell: its corners listed in the cell's boundary
/// order (or the reverse order when `flipped`).
#[derive(Clone, Debug)]
struct Lift {
    cell: CellId,
    flipped: bool,
    points: Vec<Point>,
}

fn oriented(c: &Cell, flipped: bool) -> Vec<Dart> {
    if flipped {
        c.boundary.iter().rev().map(|d| d.rev()).collect()
    } else {
        c.boundary.clone()
    }
}

/// Places `c` so that its oriented dart at position `j` starts at `at`
/// with direction class `dir`.
fn place(c: &Cell, flipped: bool, j: usize, at: Point, dir: i64) -> Lift {
    let n = c.boundary.len();
    let turn = 6 - c.kind.angle() as i64;
    let mut points = vec![Point::ORIGIN; n];
    let mut p = at;
    for t in 0..n {
        points[(j + t) % n] = p;
        p = p + Point::unit(dir + turn * t as i64);
    }
    Lift { cell: c.id, flipped, points }
}

/// Unrolls a flat torus into the plane, cut to the disk of radius `radius`.
/// The translation generators are recovered from the lifts.
pub fn develop_torus(k: &TsComplex, radius: i64) -> Result<FlatWindow> {
    if euler_characteristic(k) != 0 || !k.is_connected() {
        return Err(TsqError::Flat("not a connected surface of Euler characteristic 0".into()));
    }
    if let Some(&v) = k.vertices().iter().find(|&&v| !is_interior(k, v)) {
        return Err(TsqError::Flat(format!("vertex {v} is not flat")));
    }
    let window = Window::Disk { radius };
    let first = &k.cells()[0];
    let start = place(first, false, 0, Point::ORIGIN, 0);
    let mut frame: BTreeMap<CellId, (bool, Point)> = BTreeMap::new();
    let mut seen = HashSet::new();
    let mut lifts = Vec::new();
    let mut queue = VecDeque::from([start]);
    while let Some(l) = queue.pop_front() {
        if !l.points.iter().all(|&p| window.contains(p)) || !seen.insert((l.cell, l.points.clone())) {
            continue;
        }
        let cell = k.cell(l.cell).unwrap();
        let side0 = l.points[1] - l.points[0];
        match frame.get(&l.cell) {
            None => {
                frame.insert(l.cell, (l.flipped, side0));
            }
            Some(&f) if f == (l.flipped, side0) => {}
            Some(_) => return Err(TsqError::Flat(format!("cell {} comes back rotated or reflected", l.cell))),
        }
        let cyc = oriented(cell, l.flipped);
        let n = cyc.len();
        // Oriented position t starts at corner index `idx(t)` of `l.points`.
        let idx = |t: usize| if l.flipped { (n - t) % n } else { t };
        for (t, &d) in cyc.iter().enumerate() {
            let pos = if l.flipped { n - 1 - t } else { t };
            let (tail, head) = (l.points[idx(t)], l.points[idx((t + 1) % n)]);
            let dir = (head - tail).direction().expect("unit side") as i64;
            let occ = k.cells_on_edge(d.edge);
            let &(other, opos) = occ
                .iter()
                .find(|&&(c, p)| (c, p) != (l.cell, pos))
                .ok_or_else(|| TsqError::Flat(format!("edge {} is on the boundary", d.edge)))?;
            let oc = k.cell(other).unwrap();
            let on = oc.boundary.len();
            let (flipped, j) = if oc.boundary[opos] == d.rev() { (false, opos) } else { (true, on - 1 - opos) };
            let mut lift = place(oc, flipped, j, head, dir + 6);
            if flipped {
                // `place` fills oriented positions; store by boundary index.
                let pts = lift.points.clone();
                for (t, p) in pts.into_iter().enumerate() {
                    lift.points[(on - t) % on] = p;
                }
            }
            queue.push_back(lift);
        }
        lifts.push(l);
    }
    let translations = lattice_of(k, &lifts)?;
    let cells = lifts
        .iter()
        .map(|l| {
            let cell = k.cell(l.cell).unwrap();
            let mut pts = l.points.clone();
            if l.flipped {
                pts.reverse();
            }
            (cell.kind, pts)
        })
        .collect();
    assemble(cells, window, Some(translations))
}

fn lattice_of(k: &TsComplex, lifts: &[Lift]) -> Result<[Point; 2]> {
    let base = lifts[0].points[0];
    let mut vecs: Vec<Point> = lifts
        .iter()
        .filter(|l| l.cell == lifts[0].cell)
        .map(|l| l.points[0] - base)
        .filter(|&v| v != Point::ORIGIN)
        .collect();
    vecs.sort_by(|a, b| a.norm4().cmp(&b.norm4()).then(a.cmp(b)));
    let t1 = *vecs.first().ok_or_else(|| TsqError::Flat("window too small to see a period".into()))?;
    let mut t2 = *vecs
        .iter()
        .find(|v| t1.cross4(**v).signum() != 0)
        .ok_or_else(|| TsqError::Flat("window too small to see two periods".into()))?;
    if t1.cross4(t2).signum() < 0 {
        t2 = -t2;
    }
    let area = k.cells().iter().fold(Sqrt3::ZERO, |a, c| a + area4(c.kind));
    if t1.cross4(t2) != area {
        return Err(TsqError::Flat("translation lattice does not match the torus area".into()));
    }
    Ok([t1, t2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::FULL_TURN;

    #[test]
    fn snub_torus_shape() {
        let k = snub_torus();
        assert_eq!((k.num_vertices(), k.edges().len(), k.cells().len()), (4, 10, 6));
        for &v in k.vertices() {
            assert_eq!(k.angle_sum(v), FULL_TURN);
            assert!(is_interior(&k, v));
        }
    }

    #[test]
    fn lattice_membership() {
        let t1 = Point::unit(0);
        let t2 = Point::unit(2);
        assert_eq!(lattice_coords(t1.scale(3) - t2.scale(2), t1, t2), Some((3, -2)));
        assert_eq!(lattice_coords(Point::unit(1), t1, t2), None);
    }

    #[test]
    fn square_torus_develops_to_the_grid() {
        let f = develop_torus(&catalog::square_torus(), 6).unwrap();
        let [t1, t2] = f.translations.unwrap();
        assert_eq!((t1.norm4(), t2.norm4()), (Sqrt3::new(4, 0), Sqrt3::new(4, 0)));
        assert!(f.complex.cells().iter().all(|c| c.kind == CellKind::Square));
        assert!(f.max_margin() >= 4);
    }

    #[test]
    fn triangle_torus_develops() {
        let f = develop_torus(&catalog::triangle_torus(), 6).unwrap();
        assert!(f.complex.cells().iter().all(|c| c.kind == CellKind::Triangle));
        assert!(f.max_margin() >= 4);
    }

    #[test]
    fn snub_develops_with_its_lattice() {
        let f = develop_torus(&snub_torus(), 8).unwrap();
        let [t1, t2] = f.translations.unwrap();
        assert_eq!(t1.cross4(t2), Sqrt3::new(8, 4));
        // Translating a deep vertex by a period lands on a vertex.
        let c = f.center();
        assert!(f.vertex_at(f.coord(c) + t1).is_some());
        assert!(f.vertex_at(f.coord(c) - t2).is_some());
        assert!(f.max_margin() >= 5);
    }

    #[test]
    fn rejects_non_flat() {
        assert!(develop_torus(&catalog::single_square(), 3).is_err());
    }
}
