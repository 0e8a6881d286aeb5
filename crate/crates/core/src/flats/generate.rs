//! Window generators: lattice regions glued along straight lines.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::FlatWindow;
use crate::complex::{CellKind, ComplexBuilder, TsComplex, VertexId};
use crate::error::{Result, TsqError};
use crate::exact::{EPoint, Point, Rt3, Sqrt3};
use crate::FULL_TURN;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Window {
    /// `max(|x|, |y|) ≤ radius`.
    Square { radius: i64 },
    /// Eisenstein points of hexagonal norm at most `radius`.
    Hex { radius: i64 },
    /// Euclidean disk about the origin.
    Disk { radius: i64 },
}

impl Window {
    pub fn radius(self) -> i64 {
        match self {
            Window::Square { radius } | Window::Hex { radius } | Window::Disk { radius } => radius,
        }
    }

    pub fn contains(self, p: Point) -> bool {
        self.within(p, self.radius())
    }

    /// Whether `p` is at least `d` inside the window.
    pub fn deep(self, p: Point, d: i64) -> bool {
        self.within(p, self.radius() - d)
    }

    fn within(self, p: Point, r: i64) -> bool {
        if r < 0 {
            return false;
        }
        match self {
            Window::Square { .. } => {
                let r = Rt3::int(r);
                p.x <= r && -p.x <= r && p.y <= r && -p.y <= r
            }
            Window::Hex { .. } => eisenstein_of(p).is_some_and(|e| e.norm() <= r),
            Window::Disk { .. } => p.norm4() <= Sqrt3::new(4 * (r as i128) * (r as i128), 0),
        }
    }
}

/// Eisenstein coordinates of `p`, if it is a lattice point.
fn eisenstein_of(p: Point) -> Option<EPoint> {
    // p = a + bω has x = a + b/2 and y = b√3/2.
    if p.x.b != 0 || p.y.a != 0 {
        return None;
    }
    let b = p.y.b;
    let twice_a = p.x.a - b;
    (twice_a % 2 == 0).then(|| EPoint::new(twice_a / 2, b))
}

/// `(x − point) · normal ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub point: Point,
    pub normal: Point,
}

impl HalfPlane {
    pub fn contains(&self, p: Point) -> bool {
        (p - self.point).dot4(self.normal).signum() >= 0
    }
}

/// One region of a declarative flat: the cells of a regular lattice (unit
/// squares or unit triangles) based at `origin`, with first side direction
/// `dir` (in π/6 units), that lie in every half-plane of `bounds`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub kind: CellKind,
    pub origin: Point,
    pub dir: i64,
    #[serde(default)]
    pub bounds: Vec<HalfPlane>,
}

impl RegionSpec {
    pub fn new(kind: CellKind, origin: Point, dir: i64) -> Self {
        RegionSpec { kind, origin, dir, bounds: Vec::new() }
    }

    /// Keep the side of the line through `point` that `normal` points to.
    pub fn bound(mut self, point: Point, normal: Point) -> Self {
        self.bounds.push(HalfPlane { point, normal });
        self
    }

    fn cells(&self, window: Window, out: &mut Vec<(CellKind, Vec<Point>)>) {
        let e1 = Point::unit(self.dir);
        let e2 = Point::unit(self.dir + if self.kind == CellKind::Square { 3 } else { 2 });
        let (ox, oy) = self.origin.to_f64();
        let reach = 2 * (window.radius() + ox.hypot(oy).ceil() as i64) + 4;
        let ok = |ps: &[Point]| ps.iter().all(|&p| window.contains(p) && self.bounds.iter().all(|h| h.contains(p)));
        for i in -reach..=reach {
            for j in -reach..=reach {
                let p = self.origin + e1.scale(i) + e2.scale(j);
                let candidates: Vec<Vec<Point>> = match self.kind {
                    CellKind::Square => vec![vec![p, p + e1, p + e1 + e2, p + e2]],
                    CellKind::Triangle => vec![vec![p, p + e1, p + e2], vec![p + e1, p + e1 + e2, p + e2]],
                };
                for c in candidates {
                    if ok(&c) {
                        out.push((self.kind, c));
                    }
                }
            }
        }
    }
}

/// Builds the window cut out of the union of `regions`. Fails when the
/// regions leave a gap or overlap somewhere inside the window.
pub fn gen_regions(regions: &[RegionSpec], window: Window, translations: Option<[Point; 2]>) -> Result<FlatWindow> {
    let mut cells = Vec::new();
    for r in regions {
        r.cells(window, &mut cells);
    }
    assemble(cells, window, translations)
}

/// Glues placed polygons (counterclockwise vertex lists) into a window.
pub(crate) fn assemble(
    cells: Vec<(CellKind, Vec<Point>)>,
    window: Window,
    translations: Option<[Point; 2]>,
) -> Result<FlatWindow> {
    let mut seen = BTreeSet::new();
    let mut unique = Vec::new();
    for (kind, ps) in cells {
        let mut key = ps.clone();
        key.sort();
        if seen.insert(key) {
            unique.push((kind, ps));
        }
    }
    if unique.is_empty() {
        return Err(TsqError::Flat("window contains no cells".into()));
    }
    let points: BTreeSet<Point> = unique.iter().flat_map(|(_, ps)| ps.iter().copied()).collect();
    let id: BTreeMap<Point, VertexId> = points.iter().enumerate().map(|(i, &p)| (p, i as VertexId)).collect();
    let mut placed: Vec<(Vec<VertexId>, CellKind, Vec<VertexId>)> = unique
        .iter()
        .map(|(kind, ps)| {
            let cycle: Vec<VertexId> = ps.iter().map(|p| id[p]).collect();
            let mut key = cycle.clone();
            key.sort();
            (key, *kind, cycle)
        })
        .collect();
    placed.sort();
    // Edges are numbered by their sorted endpoint pair.
    let mut pairs = BTreeSet::new();
    for (_, _, cycle) in &placed {
        for i in 0..cycle.len() {
            let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    let mut b = ComplexBuilder::new();
    for &(a, c) in &pairs {
        b.edge(a, c);
    }
    for (_, kind, cycle) in &placed {
        b.cell(*kind, cycle);
    }
    let complex = b.build()?;
    let coords: BTreeMap<VertexId, Point> = id.iter().map(|(&p, &v)| (v, p)).collect();
    check_local_flatness(&complex, &coords, window)?;
    Ok(FlatWindow::new(complex, coords, window, translations))
}

/// Whether `v` has a full disk of cells around it.
pub(crate) fn is_interior(k: &TsComplex, v: VertexId) -> bool {
    k.angle_sum(v) == FULL_TURN && k.corners_at(v).len() == k.out_darts(v).len()
}

/// Checks that `coords` realise every cell as a counterclockwise unit
/// polygon, then the local flatness conditions.
pub(crate) fn verify_geometry(k: &TsComplex, coords: &BTreeMap<VertexId, Point>, window: Window) -> Result<()> {
    let dir = |a: VertexId, b: VertexId| -> Option<i64> {
        Some((*coords.get(&b)? - *coords.get(&a)?).direction()? as i64)
    };
    for e in k.edges() {
        if dir(e.ends[0], e.ends[1]).is_none() {
            return Err(TsqError::Constraint(format!("edge {} is not a unit segment", e.id)));
        }
    }
    for c in k.cells() {
        let cyc = k.cell_cycle(c);
        let n = cyc.len();
        let turn = 6 - c.kind.angle() as i64;
        let dirs: Vec<i64> = (0..n).map(|i| dir(cyc[i], cyc[(i + 1) % n]).unwrap()).collect();
        if (0..n).any(|i| (dirs[(i + 1) % n] - dirs[i] - turn).rem_euclid(12) != 0) {
            return Err(TsqError::Constraint(format!("cell {} is not a counterclockwise unit polygon", c.id)));
        }
    }
    check_local_flatness(k, coords, window)
}

fn check_local_flatness(k: &TsComplex, coords: &BTreeMap<VertexId, Point>, window: Window) -> Result<()> {
    for &v in k.vertices() {
        if k.angle_sum(v) > FULL_TURN {
            return Err(TsqError::Constraint(format!("cells overlap at vertex {v}")));
        }
        if window.deep(coords[&v], 2) && !is_interior(k, v) {
            return Err(TsqError::Constraint(format!("regions leave a gap at vertex {v}")));
        }
    }
    Ok(())
}

/// Distance from each vertex to the nearest non-interior vertex.
pub(crate) fn margins(k: &TsComplex) -> BTreeMap<VertexId, u32> {
    let mut dist = vec![u32::MAX; k.num_vertices()];
    let mut queue = VecDeque::new();
    for (i, &v) in k.vertices().iter().enumerate() {
        if !is_interior(k, v) {
            dist[i] = 0;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        for &j in k.heads_at(i) {
            if dist[j] == u32::MAX {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    k.vertices().iter().zip(dist).map(|(&v, d)| (v, d)).collect()
}

fn pt(x: Rt3, y: Rt3) -> Point {
    Point::new(x, y)
}

/// The square grid, cut to `[-r, r]²`.
pub fn gen_gaussian(r: i64) -> Result<FlatWindow> {
    let translations = [Point::unit(0), Point::unit(3)];
    gen_regions(&[RegionSpec::new(CellKind::Square, Point::ORIGIN, 0)], Window::Square { radius: r }, Some(translations))
}

/// The triangular tiling, cut to the hexagon of radius `r`.
pub fn gen_eisenstein(r: i64) -> Result<FlatWindow> {
    let translations = [Point::unit(0), Point::unit(2)];
    gen_regions(&[RegionSpec::new(CellKind::Triangle, Point::ORIGIN, 0)], Window::Hex { radius: r }, Some(translations))
}

/// Horizontal strips stacked periodically. Each entry is a cell kind and a
/// width in rows; kinds must alternate around the period.
pub fn gen_striped(spec: &[(CellKind, u32)], radius: i64) -> Result<FlatWindow> {
    if spec.len() < 2 || spec.len() % 2 == 1 {
        return Err(TsqError::Constraint("stripes need an even number of alternating strips".into()));
    }
    for i in 0..spec.len() {
        if spec[i].0 == spec[(i + 1) % spec.len()].0 {
            return Err(TsqError::Constraint("adjacent stripes must differ in kind".into()));
        }
        if spec[i].1 == 0 {
            return Err(TsqError::Constraint("stripe widths must be positive".into()));
        }
    }
    let height = |&(kind, w): &(CellKind, u32)| match kind {
        CellKind::Square => Rt3::int(w as i64),
        CellKind::Triangle => Rt3::new(0, w as i64),
    };
    let shift = |&(kind, w): &(CellKind, u32)| match kind {
        CellKind::Square => Rt3::ZERO,
        CellKind::Triangle => Rt3::new(w as i64, 0),
    };
    let period_y = spec.iter().map(height).fold(Rt3::ZERO, |a, b| a + b);
    let period_x = spec.iter().map(shift).fold(Rt3::ZERO, |a, b| a + b);
    let window = Window::Disk { radius };
    let limit = Rt3::int(radius + 2);
    let up = Point::unit(3);
    let mut regions = Vec::new();
    let strip = |kind: CellKind, lo: Point, h: Rt3| {
        RegionSpec::new(kind, lo, 0).bound(lo, up).bound(pt(lo.x, lo.y + h), -up)
    };
    // Upwards from y = 0, then downwards.
    let mut base = Point::ORIGIN;
    'up: loop {
        for s in spec {
            if base.y > limit {
                break 'up;
            }
            regions.push(strip(s.0, base, height(s)));
            base = pt(base.x + shift(s), base.y + height(s));
        }
    }
    let mut top = Point::ORIGIN;
    'down: loop {
        for s in spec.iter().rev() {
            if -top.y > limit {
                break 'down;
            }
            let lo = pt(top.x - shift(s), top.y - height(s));
            regions.push(strip(s.0, lo, height(s)));
            top = lo;
        }
    }
    let translations = [Point::unit(0), pt(period_x, period_y)];
    gen_regions(&regions, window, Some(translations))
}

/// The central triangle of the radial flat and its corners `A`, `B`, `C`.
fn radial_corners() -> (Point, Point, Point) {
    (Point::unit(2), Point::ORIGIN, Point::unit(0))
}

/// A radial flat: a central triangle `ABC`, a half-strip of squares on each
/// side, and a triangular wedge of opening 2π/3 at each corner. `widths`
/// are the strip widths along `BC`, `AB`, `CA`; only `[1, 1, 1]` fits.
pub fn gen_radial_y(arm: u32, widths: [u32; 3]) -> Result<FlatWindow> {
    let (a, b, c) = radial_corners();
    let w = |i: usize| widths[i] as i64;
    let u = Point::unit;
    let regions = vec![
        RegionSpec::new(CellKind::Triangle, b, 0).bound(b, u(3)).bound(b, u(11)).bound(c, u(7)),
        // Square half-strips, one per side, pointing away from the triangle.
        RegionSpec::new(CellKind::Square, b, 0).bound(b, u(0)).bound(b + u(0).scale(w(0)), u(6)).bound(b, u(9)),
        RegionSpec::new(CellKind::Square, b, 2).bound(b, u(2)).bound(b + u(2).scale(w(1)), u(8)).bound(b, u(5)),
        RegionSpec::new(CellKind::Square, c, 1).bound(c, u(4)).bound(c + u(4).scale(w(2)), u(10)).bound(c, u(1)),
        // Triangle wedges between consecutive strips.
        RegionSpec::new(CellKind::Triangle, b, 5).bound(b, u(8)).bound(b, u(6)),
        RegionSpec::new(CellKind::Triangle, c, 9).bound(c, u(0)).bound(c, u(10)),
        RegionSpec::new(CellKind::Triangle, a, 1).bound(a, u(4)).bound(a, u(2)),
    ];
    let radius = 2 * arm as i64 + 4;
    gen_regions(&regions, Window::Disk { radius }, None)
}

/// Endpoint pairs `((u1, v1), (u2, v2))` of the radial flat with arm
/// length `arm`: `u1, u2` end a rung of the `AB` strip at distance `arm`
/// from the triangle and `v1, v2` a rung of the `CA` strip.
pub fn radial_y_probe_points(flat: &FlatWindow, arm: u32) -> Result<((VertexId, VertexId), (VertexId, VertexId))> {
    let (a, b, c) = radial_corners();
    let s = arm as i64;
    let find = |p: Point| flat.vertex_at(p).ok_or_else(|| TsqError::Flat("probe point outside the window".into()));
    let u1 = find(a + Point::unit(5).scale(s))?;
    let u2 = find(b + Point::unit(5).scale(s))?;
    let v1 = find(a + Point::unit(1).scale(s))?;
    let v2 = find(c + Point::unit(1).scale(s))?;
    Ok(((u1, v1), (u2, v2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler_characteristic;

    #[test]
    fn gaussian_window_counts() {
        for r in 1..5 {
            let f = gen_gaussian(r).unwrap();
            let n = (2 * r + 1) as usize;
            assert_eq!(f.complex.num_vertices(), n * n);
            assert_eq!(f.complex.cells().len(), (n - 1) * (n - 1));
            assert_eq!(euler_characteristic(&f.complex), 1);
            assert_eq!(f.max_margin() as i64, r);
        }
    }

    #[test]
    fn eisenstein_window_counts() {
        for r in 1..5 {
            let f = gen_eisenstein(r).unwrap();
            assert_eq!(f.complex.num_vertices() as i64, 3 * r * r + 3 * r + 1);
            assert_eq!(f.complex.cells().len() as i64, 6 * r * r);
        }
    }

    #[test]
    fn ids_follow_coordinates() {
        let f = gen_gaussian(2).unwrap();
        let pts: Vec<Point> = f.coords.values().copied().collect();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(f.coord(0), pt(Rt3::int(-2), Rt3::int(-2)));
    }

    #[test]
    fn stripes_are_flat_inside() {
        use CellKind::*;
        for spec in [vec![(Square, 1), (Triangle, 1)], vec![(Square, 2), (Triangle, 3)], vec![(Triangle, 1), (Square, 1), (Triangle, 2), (Square, 3)]] {
            let f = gen_striped(&spec, 8).unwrap();
            assert!(f.max_margin() >= 5, "{spec:?}");
        }
        assert!(gen_striped(&[(Triangle, 2)], 5).is_err());
        assert!(gen_striped(&[(Square, 1), (Square, 1)], 5).is_err());
    }

    #[test]
    fn radial_flat_assembles() {
        let f = gen_radial_y(4, [1, 1, 1]).unwrap();
        assert!(f.max_margin() >= 8);
        let ((u1, v1), (u2, v2)) = radial_y_probe_points(&f, 4).unwrap();
        let d = |x, y| crate::metric::distance(&f.complex, x, y).unwrap();
        assert_eq!(d(u1, u2), 1);
        assert_eq!(d(v1, v2), 1);
        assert_eq!(d(u1, v1), 8);
        assert_eq!(d(u2, v2), 9);
    }

    #[test]
    fn bad_widths_are_rejected() {
        assert!(matches!(gen_radial_y(3, [2, 1, 1]), Err(TsqError::Constraint(_))));
        assert!(matches!(gen_radial_y(3, [1, 1, 3]), Err(TsqError::Constraint(_))));
    }
}
