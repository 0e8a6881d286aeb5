//! Regions, vertex types, the two-coloring and the structural classes of flats.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::torus::lattice_coords;
use super::FlatWindow;
use crate::complex::{CellId, CellKind, EdgeId, VertexId};
use crate::error::{Result, TsqError};
use crate::exact::{orient, Point};

/// Regions of at most this many cells count as small when deciding whether
/// a crumpled flat is thoroughly crumpled.
pub const THOROUGH_BOUND: usize = 64;

/// A maximal edge-connected set of cells of one kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub id: usize,
    pub kind: CellKind,
    pub cells: Vec<CellId>,
    pub vertices: Vec<VertexId>,
    /// Whether the region stays away from the window boundary.
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDecomp {
    pub regions: Vec<Region>,
    pub cell_region: BTreeMap<CellId, usize>,
}

impl RegionDecomp {
    pub fn count(&self, kind: CellKind) -> usize {
        self.regions.iter().filter(|r| r.kind == kind).count()
    }

    pub fn bounded(&self) -> usize {
        self.regions.iter().filter(|r| r.bounded).count()
    }
}

pub fn regions(flat: &FlatWindow) -> RegionDecomp {
    let k = &flat.complex;
    let cells = k.cells();
    let mut uf = UnionFind::<usize>::new(cells.len());
    let index: BTreeMap<CellId, usize> = cells.iter().enumerate().map(|(i, c)| (c.id, i)).collect();
    for e in k.edges() {
        let on = k.cells_on_edge(e.id);
        for w in on.windows(2) {
            let (a, b) = (index[&w[0].0], index[&w[1].0]);
            if cells[a].kind == cells[b].kind {
                uf.union(a, b);
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..cells.len() {
        by_root.entry(uf.find(i)).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
    groups.sort_by_key(|g| cells[g[0]].id);
    let mut regions = Vec::new();
    let mut cell_region = BTreeMap::new();
    for (id, g) in groups.into_iter().enumerate() {
        let verts: BTreeSet<VertexId> = g.iter().flat_map(|&i| k.cell_vertices(&cells[i])).collect();
        let bounded = verts.iter().all(|v| flat.margin(*v) > 0);
        for &i in &g {
            cell_region.insert(cells[i].id, id);
        }
        regions.push(Region {
            id,
            kind: cells[g[0]].kind,
            cells: g.iter().map(|&i| cells[i].id).collect(),
            vertices: verts.into_iter().collect(),
            bounded,
        });
    }
    RegionDecomp { regions, cell_region }
}

/// Whether the region's vertices are exactly the points of its lattice
/// inside their convex hull.
pub fn region_is_convex(flat: &FlatWindow, region: &Region) -> bool {
    let k = &flat.complex;
    let c = k.cell(region.cells[0]).unwrap();
    let cyc = k.cell_cycle(c);
    let (p0, p1, p2) = (flat.coord(cyc[0]), flat.coord(cyc[1]), flat.coord(*cyc.last().unwrap()));
    let (e1, e2) = (p1 - p0, p2 - p0);
    let pts: Vec<Point> = region.vertices.iter().map(|&v| flat.coord(v)).collect();
    let hull = convex_hull(&pts);
    let coords: Vec<(i64, i64)> = pts.iter().map(|&p| lattice_coords(p - p0, e1, e2).expect("lattice point")).collect();
    let (lo_a, hi_a) = (coords.iter().map(|c| c.0).min().unwrap(), coords.iter().map(|c| c.0).max().unwrap());
    let (lo_b, hi_b) = (coords.iter().map(|c| c.1).min().unwrap(), coords.iter().map(|c| c.1).max().unwrap());
    let mine: BTreeSet<Point> = pts.iter().copied().collect();
    for a in lo_a..=hi_a {
        for b in lo_b..=hi_b {
            let p = p0 + e1.scale(a) + e2.scale(b);
            if inside(&hull, p) && !mine.contains(&p) {
                return false;
            }
        }
    }
    true
}

/// Counterclockwise hull without collinear points.
fn convex_hull(pts: &[Point]) -> Vec<Point> {
    let mut ps: Vec<Point> = pts.to_vec();
    ps.sort_by(|a, b| a.x.cmp(&b.x).then(a.y.cmp(&b.y)));
    ps.dedup();
    if ps.len() < 3 {
        return ps;
    }
    let mut hull: Vec<Point> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 { Box::new(ps.iter()) } else { Box::new(ps.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn inside(hull: &[Point], p: Point) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == p,
        2 => orient(hull[0], hull[1], p) == 0 && (p - hull[0]).dot4(p - hull[1]).signum() <= 0,
        n => (0..n).all(|i| orient(hull[i], hull[(i + 1) % n], p) >= 0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexType {
    TriangleInterior,
    SquareInterior,
    /// Three triangles and two adjacent squares.
    Side,
    /// Three triangles and two squares that do not share an edge.
    Corner,
    WindowBoundary,
}

pub fn vertex_type(flat: &FlatWindow, v: VertexId) -> Result<VertexType> {
    let k = &flat.complex;
    k.check_vertex(v)?;
    if flat.margin(v) == 0 {
        return Ok(VertexType::WindowBoundary);
    }
    let corners = k.corners_at(v);
    let squares: Vec<_> = corners.iter().filter(|c| k.cell(c.cell).unwrap().kind == CellKind::Square).collect();
    Ok(match (corners.len() - squares.len(), squares.len()) {
        (6, 0) => VertexType::TriangleInterior,
        (0, 4) => VertexType::SquareInterior,
        (3, 2) => {
            let (a, b) = (squares[0], squares[1]);
            let adjacent = [a.darts.0, a.darts.1].iter().any(|d| [b.darts.0, b.darts.1].contains(d));
            if adjacent {
                VertexType::Side
            } else {
                VertexType::Corner
            }
        }
        _ => return Err(TsqError::Flat(format!("vertex {v} has an impossible flat link"))),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
    Yellow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub edges: BTreeMap<EdgeId, Color>,
    pub cells: BTreeMap<CellId, Color>,
}

/// Edge direction class in π/6 units, in `0..12`.
pub(crate) fn edge_direction(flat: &FlatWindow, e: EdgeId) -> u8 {
    let [a, b] = flat.complex.edge(e).unwrap().ends;
    (flat.coord(b) - flat.coord(a)).direction().expect("unit edge")
}

/// Edges parallel to a sixth root of unity are blue, the rest red; squares
/// are yellow and each triangle takes the color of its sides.
pub fn coloring(flat: &FlatWindow) -> Result<Coloring> {
    let k = &flat.complex;
    if !k.edges().iter().any(|e| edge_direction(flat, e.id).is_multiple_of(6)) {
        return Err(TsqError::Flat("no edge is parallel to the x-axis".into()));
    }
    let edges: BTreeMap<EdgeId, Color> = k
        .edges()
        .iter()
        .map(|e| (e.id, if edge_direction(flat, e.id).is_multiple_of(2) { Color::Blue } else { Color::Red }))
        .collect();
    let mut cells = BTreeMap::new();
    for c in k.cells() {
        let color = match c.kind {
            CellKind::Square => Color::Yellow,
            CellKind::Triangle => {
                let cs: BTreeSet<Color> = c.boundary.iter().map(|d| edges[&d.edge]).collect();
                if cs.len() != 1 {
                    return Err(TsqError::Flat(format!("triangle {} has mixed side colors", c.id)));
                }
                *cs.first().unwrap()
            }
        };
        cells.insert(c.id, color);
    }
    Ok(Coloring { edges, cells })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlatClass {
    Pure,
    Striped,
    Radial,
    Crumpled,
    ThoroughlyCrumpled,
    /// The window is too shallow to say.
    BoundaryInconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: FlatClass,
    /// True when decided from a period lattice rather than from the window.
    pub exact: bool,
    pub corners: usize,
    pub square_regions: usize,
    pub triangle_regions: usize,
    pub bounded_regions: usize,
    pub largest_bounded: usize,
}

pub fn classify(flat: &FlatWindow) -> Result<Classification> {
    let k = &flat.complex;
    let rd = regions(flat);
    let mut corners = 0;
    for &v in k.vertices() {
        if vertex_type(flat, v)? == VertexType::Corner {
            corners += 1;
        }
    }
    let largest_bounded = rd.regions.iter().filter(|r| r.bounded).map(|r| r.cells.len()).max().unwrap_or(0);
    let kinds: BTreeSet<CellKind> = k.cells().iter().map(|c| c.kind).collect();
    let exact = flat.translations.is_some();
    let class = if kinds.len() == 1 {
        FlatClass::Pure
    } else if exact {
        // A periodic mixed flat is striped or thoroughly crumpled.
        if corners == 0 {
            FlatClass::Striped
        } else {
            FlatClass::ThoroughlyCrumpled
        }
    } else if flat.max_margin() < 2 {
        FlatClass::BoundaryInconclusive
    } else if corners == 0 {
        FlatClass::Striped
    } else {
        let half = flat.max_margin().div_ceil(2);
        let radial = rd
            .regions
            .iter()
            .any(|r| !r.bounded && r.vertices.iter().any(|&v| flat.margin(v) >= half));
        if radial {
            FlatClass::Radial
        } else if largest_bounded <= THOROUGH_BOUND {
            FlatClass::ThoroughlyCrumpled
        } else {
            FlatClass::Crumpled
        }
    };
    Ok(Classification {
        class,
        exact,
        corners,
        square_regions: rd.count(CellKind::Square),
        triangle_regions: rd.count(CellKind::Triangle),
        bounded_regions: rd.bounded(),
        largest_bounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flats::{develop_torus, gen_eisenstein, gen_gaussian, gen_radial_y, gen_striped, snub_torus};

    #[test]
    fn pure_flats() {
        let g = gen_gaussian(4).unwrap();
        assert_eq!(classify(&g).unwrap().class, FlatClass::Pure);
        assert_eq!(regions(&g).regions.len(), 1);
        assert_eq!(vertex_type(&g, g.center()).unwrap(), VertexType::SquareInterior);
        let e = gen_eisenstein(4).unwrap();
        assert_eq!(vertex_type(&e, e.center()).unwrap(), VertexType::TriangleInterior);
        let col = coloring(&e).unwrap();
        assert!(col.edges.values().all(|&c| c == Color::Blue));
    }

    #[test]
    fn striped_flat() {
        let f = gen_striped(&[(CellKind::Square, 2), (CellKind::Triangle, 1)], 10).unwrap();
        let c = classify(&f).unwrap();
        assert_eq!(c.class, FlatClass::Striped);
        assert_eq!(c.corners, 0);
        let sides = f.deep_vertices(1).iter().filter(|&&v| vertex_type(&f, v).unwrap() == VertexType::Side).count();
        assert!(sides > 0);
    }

    #[test]
    fn radial_census() {
        let f = gen_radial_y(6, [1, 1, 1]).unwrap();
        let c = classify(&f).unwrap();
        assert_eq!(c.class, FlatClass::Radial);
        assert!(!c.exact);
        assert_eq!(c.corners, 3);
        assert_eq!(c.square_regions, 3);
        assert_eq!(c.triangle_regions, 4);
        assert_eq!(c.bounded_regions, 1);
        let col = coloring(&f).unwrap();
        assert!(col.cells.values().any(|&c| c == Color::Red));
        assert!(col.cells.values().any(|&c| c == Color::Blue));
    }

    #[test]
    fn snub_is_thoroughly_crumpled() {
        let f = develop_torus(&snub_torus(), 10).unwrap();
        let c = classify(&f).unwrap();
        assert_eq!(c.class, FlatClass::ThoroughlyCrumpled);
        assert!(c.exact);
        assert!(c.largest_bounded <= 2);
    }

    #[test]
    fn bounded_regions_are_convex() {
        for f in [develop_torus(&snub_torus(), 8).unwrap(), gen_radial_y(5, [1, 1, 1]).unwrap()] {
            for r in regions(&f).regions.iter().filter(|r| r.bounded) {
                assert!(region_is_convex(&f, r), "region {}", r.id);
            }
        }
    }

    #[test]
    fn hull_membership() {
        let p = |x, y| Point::new(crate::exact::Rt3::int(x), crate::exact::Rt3::int(y));
        let h = convex_hull(&[p(0, 0), p(2, 0), p(2, 2), p(0, 2), p(1, 1), p(1, 0)]);
        assert_eq!(h.len(), 4);
        assert!(inside(&h, p(1, 2)));
        assert!(!inside(&h, p(3, 1)));
    }
}
