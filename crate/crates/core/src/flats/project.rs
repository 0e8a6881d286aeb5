//! Color projections onto the triangular plane and the product embedding.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_rational::Ratio;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::analysis::edge_direction;
use super::FlatWindow;
use crate::complex::VertexId;
use crate::error::{Result, TsqError};
use crate::exact::{EPoint, Point, ProductPoint};
use crate::intervals::interval;
use crate::metric::distance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Keep {
    Blue,
    Red,
}

/// Lattice step of a kept edge. Red directions are turned back by π/2 first.
fn step(keep: Keep, dir: u8) -> EPoint {
    let c = match keep {
        Keep::Blue => dir as i64,
        Keep::Red => (dir as i64 - 3).rem_euclid(12),
    };
    let [p, q] = match c {
        0 => [1, 0],
        2 => [0, 1],
        4 => [-1, 1],
        6 => [-1, 0],
        8 => [0, -1],
        10 => [1, -1],
        _ => unreachable!("odd class after rotation"),
    };
    EPoint::new(p, q)
}

/// Collapses the edges of the other color and maps what is left onto the
/// triangular lattice. The vertex at the origin (or the centre) goes to 0.
pub fn project(flat: &FlatWindow, keep: Keep) -> Result<BTreeMap<VertexId, EPoint>> {
    let k = &flat.complex;
    let n = k.num_vertices();
    let idx = |v: VertexId| k.vertex_index(v).unwrap();
    let kept = |dir: u8| dir.is_multiple_of(2) == (keep == Keep::Blue);
    let mut uf = UnionFind::<usize>::new(n);
    for e in k.edges() {
        if !kept(edge_direction(flat, e.id)) {
            uf.union(idx(e.ends[0]), idx(e.ends[1]));
        }
    }
    let mut adj: Vec<Vec<(usize, EPoint)>> = vec![Vec::new(); n];
    let mut kept_edges = Vec::new();
    for e in k.edges() {
        let dir = edge_direction(flat, e.id);
        if kept(dir) {
            let (a, b) = (uf.find(idx(e.ends[0])), uf.find(idx(e.ends[1])));
            let s = step(keep, dir);
            adj[a].push((b, s));
            adj[b].push((a, -s));
            kept_edges.push((a, b, s));
        }
    }
    let anchor = flat.vertex_at(Point::ORIGIN).unwrap_or_else(|| flat.center());
    let root = uf.find(idx(anchor));
    let mut at: Vec<Option<EPoint>> = vec![None; n];
    at[root] = Some(EPoint::ZERO);
    let mut queue = VecDeque::from([root]);
    while let Some(a) = queue.pop_front() {
        let pa = at[a].unwrap();
        for &(b, s) in &adj[a] {
            if at[b].is_none() {
                at[b] = Some(pa + s);
                queue.push_back(b);
            }
        }
    }
    for &(a, b, s) in &kept_edges {
        if at[a].zip(at[b]).map(|(pa, pb)| pb - pa) != Some(s) {
            return Err(TsqError::Flat("projection is inconsistent around a cycle".into()));
        }
    }
    k.vertices()
        .iter()
        .map(|&v| {
            at[uf.find(idx(v))]
                .map(|p| (v, p))
                .ok_or_else(|| TsqError::Flat(format!("vertex {v} is cut off from the anchor")))
        })
        .collect()
}

/// Both projections at once: the map into ℰ × ℰ.
pub fn embed(flat: &FlatWindow) -> Result<BTreeMap<VertexId, ProductPoint>> {
    let b = project(flat, Keep::Blue)?;
    let r = project(flat, Keep::Red)?;
    Ok(b.iter().map(|(&v, &pb)| (v, ProductPoint { b: pb, r: r[&v] })).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedReport {
    pub injective: bool,
    pub checked: usize,
    /// Pairs too close to the window edge for their distance to be trusted.
    pub skipped: usize,
    /// `(u, v, distance in the flat, distance in ℰ × ℰ)`.
    pub failures: Vec<(VertexId, VertexId, u32, i64)>,
}

impl EmbedReport {
    pub fn ok(&self) -> bool {
        self.injective && self.failures.is_empty()
    }
}

/// Compares flat distances with product distances on the given pairs.
pub fn isom_embed_check(flat: &FlatWindow, pairs: &[(VertexId, VertexId)]) -> Result<EmbedReport> {
    let emb = embed(flat)?;
    let injective = emb.values().collect::<HashSet<_>>().len() == emb.len();
    let mut report = EmbedReport { injective, checked: 0, skipped: 0, failures: Vec::new() };
    for &(u, v) in pairs {
        let d = distance(&flat.complex, u, v)?;
        if flat.margin(u).max(flat.margin(v)) < d {
            report.skipped += 1;
            continue;
        }
        report.checked += 1;
        let de = emb[&u].dist(emb[&v]);
        if de != d as i64 {
            report.failures.push((u, v, d, de));
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalImageReport {
    pub u: VertexId,
    pub v: VertexId,
    pub interval_size: usize,
    pub product_size: usize,
    pub equal: bool,
}

/// Whether the image of the interval `I(u, v)` is the product of the two
/// projected intervals, cut down to the image of the flat.
pub fn interval_image_check(flat: &FlatWindow, u: VertexId, v: VertexId) -> Result<IntervalImageReport> {
    let emb = embed(flat)?;
    let iv = interval(&flat.complex, u, v)?;
    let image: BTreeSet<ProductPoint> = iv.labels.keys().map(|w| emb[w]).collect();
    let (a, b) = (emb[&u], emb[&v]);
    let product: BTreeSet<ProductPoint> =
        emb.values().filter(|p| p.b.between(a.b, b.b) && p.r.between(a.r, b.r)).copied().collect();
    Ok(IntervalImageReport {
        u,
        v,
        interval_size: image.len(),
        product_size: product.len(),
        equal: image == product,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuasiFlatReport {
    pub base: VertexId,
    /// Images of the two period vectors, as `(b.p, b.q, r.p, r.q)`.
    pub spans: [[i64; 4]; 2],
    pub c_squared: Ratio<i128>,
    pub c: f64,
    pub farthest: VertexId,
}

fn coords4(p: ProductPoint) -> [i128; 4] {
    [p.b.p as i128, p.b.q as i128, p.r.p as i128, p.r.q as i128]
}

/// Twice the Euclidean inner product on ℰ × ℰ in lattice coordinates.
fn dot2(x: [i128; 4], y: [i128; 4]) -> i128 {
    let plane = |a: i128, b: i128, c: i128, d: i128| 2 * a * c + a * d + b * c + 2 * b * d;
    plane(x[0], x[1], y[0], y[1]) + plane(x[2], x[3], y[2], y[3])
}

/// How far the embedded window strays from the plane through the image of
/// a base vertex spanned by the images of the two periods.
pub fn quasi_flat(flat: &FlatWindow) -> Result<QuasiFlatReport> {
    let [t1, t2] = flat.translations.ok_or_else(|| TsqError::Flat("window has no period lattice".into()))?;
    let emb = embed(flat)?;
    let mut cands = flat.deep_vertices(0);
    cands.sort_by_key(|&v| (flat.coord(v).norm4(), v));
    let (base, w1, w2) = cands
        .iter()
        .find_map(|&v| {
            let p = flat.coord(v);
            Some((v, flat.vertex_at(p + t1)?, flat.vertex_at(p + t2)?))
        })
        .ok_or_else(|| TsqError::Flat("window is smaller than a period".into()))?;
    let z0 = coords4(emb[&base]);
    let sub = |a: [i128; 4], b: [i128; 4]| [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]];
    let a1 = sub(coords4(emb[&w1]), z0);
    let a2 = sub(coords4(emb[&w2]), z0);
    let (g11, g12, g22) = (dot2(a1, a1), dot2(a1, a2), dot2(a2, a2));
    let det = g11 * g22 - g12 * g12;
    if det == 0 {
        return Err(TsqError::Flat("period images are collinear".into()));
    }
    let mut best = (Ratio::from_integer(0), base);
    for (&v, &p) in &emb {
        let r = sub(coords4(p), z0);
        let (b1, b2) = (dot2(a1, r), dot2(a2, r));
        let along = g22 * b1 * b1 - 2 * g12 * b1 * b2 + g11 * b2 * b2;
        let d2 = Ratio::new(dot2(r, r) * det - along, 2 * det);
        if d2 > best.0 {
            best = (d2, v);
        }
    }
    let narrow = |a: [i128; 4]| a.map(|x| x as i64);
    let c = (*best.0.numer() as f64 / *best.0.denom() as f64).sqrt();
    Ok(QuasiFlatReport { base, spans: [narrow(a1), narrow(a2)], c_squared: best.0, c, farthest: best.1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CellKind;
    use crate::flats::{develop_torus, gen_eisenstein, gen_gaussian, gen_radial_y, gen_striped, snub_torus};

    #[test]
    fn gaussian_projects_to_lines() {
        let f = gen_gaussian(3).unwrap();
        let b = project(&f, Keep::Blue).unwrap();
        assert!(b.values().all(|p| p.q == 0));
        let q = quasi_flat(&f).unwrap();
        assert_eq!(q.c_squared, Ratio::from_integer(0));
    }

    #[test]
    fn eisenstein_blue_is_the_identity() {
        let f = gen_eisenstein(3).unwrap();
        let b = project(&f, Keep::Blue).unwrap();
        for (&v, &p) in &b {
            assert_eq!(p.to_point(), f.coord(v));
        }
    }

    #[test]
    fn embedding_is_isometric() {
        for f in [
            gen_striped(&[(CellKind::Square, 1), (CellKind::Triangle, 2)], 8).unwrap(),
            gen_radial_y(3, [1, 1, 1]).unwrap(),
            develop_torus(&snub_torus(), 8).unwrap(),
        ] {
            let deep = f.deep_vertices(3);
            let pairs: Vec<_> = deep.iter().flat_map(|&u| deep.iter().map(move |&v| (u, v))).step_by(7).collect();
            let rep = isom_embed_check(&f, &pairs).unwrap();
            assert!(rep.ok(), "{:?}", rep.failures.first());
            assert!(rep.checked > 0);
        }
    }

    #[test]
    fn intervals_are_products() {
        let f = develop_torus(&snub_torus(), 9).unwrap();
        let c = f.center();
        for &v in f.deep_vertices(5).iter().step_by(5) {
            let rep = interval_image_check(&f, c, v).unwrap();
            assert!(rep.equal, "{rep:?}");
        }
    }

    #[test]
    fn snub_quasi_flat_is_stable() {
        let a = quasi_flat(&develop_torus(&snub_torus(), 8).unwrap()).unwrap();
        let b = quasi_flat(&develop_torus(&snub_torus(), 14).unwrap()).unwrap();
        assert_eq!(a.c_squared, b.c_squared);
        assert!(a.c > 0.0);
    }
}
