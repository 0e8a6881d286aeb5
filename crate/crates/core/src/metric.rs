//! The 1-skeleton metric, geodesic enumeration and fellow-traveler distances.

use std::collections::VecDeque;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::complex::{TsComplex, VertexId};
use crate::error::{Result, TsqError};
use crate::path::PathSeq;

/// Breadth-first distances from one source; `None` marks unreachable vertices.
#[derive(Clone, Debug)]
pub struct DistanceField {
    pub source: VertexId,
    dist: Vec<Option<u32>>,
}

impl DistanceField {
    pub fn get(&self, k: &TsComplex, v: VertexId) -> Option<u32> {
        k.vertex_index(v).and_then(|i| self.dist[i])
    }

    pub fn at_index(&self, idx: usize) -> Option<u32> {
        self.dist[idx]
    }

    pub fn max(&self) -> u32 {
        self.dist.iter().flatten().copied().max().unwrap_or(0)
    }
}

pub fn distances(k: &TsComplex, source: VertexId) -> Result<DistanceField> {
    let s = k.check_vertex(source)?;
    Ok(DistanceField { source, dist: bfs_from(k, &[s]) })
}

/// Multi-source BFS over vertex indices.
pub(crate) fn bfs_from(k: &TsComplex, sources: &[usize]) -> Vec<Option<u32>> {
    let mut dist = vec![None; k.num_vertices()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(i) = queue.pop_front() {
        let d = dist[i].unwrap() + 1;
        for &j in k.heads_at(i) {
            if dist[j].is_none() {
                dist[j] = Some(d);
                queue.push_back(j);
            }
        }
    }
    dist
}

/// Distance from `u` to `v`, stopping once `v` is reached or `bound` is
/// exceeded.
pub fn bounded_distance(k: &TsComplex, u: VertexId, v: VertexId, bound: u32) -> Result<Option<u32>> {
    let s = k.check_vertex(u)?;
    let t = k.check_vertex(v)?;
    if s == t {
        return Ok(Some(0));
    }
    let mut dist = vec![u32::MAX; k.num_vertices()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(i) = queue.pop_front() {
        let d = dist[i] + 1;
        if d > bound {
            break;
        }
        for &j in k.heads_at(i) {
            if dist[j] == u32::MAX {
                if j == t {
                    return Ok(Some(d));
                }
                dist[j] = d;
                queue.push_back(j);
            }
        }
    }
    Ok(None)
}

pub fn distance(k: &TsComplex, u: VertexId, v: VertexId) -> Result<u32> {
    bounded_distance(k, u, v, u32::MAX)?.ok_or(TsqError::Unreachable { from: u, to: v })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeodesicList {
    pub paths: Vec<PathSeq>,
    /// Exact number of geodesics, even when `paths` is truncated.
    pub count: BigUint,
    pub overflow: bool,
}

/// All geodesics from `u` to `v` in lexicographic dart order, at most `cap`.
pub fn enumerate_geodesics(k: &TsComplex, u: VertexId, v: VertexId, cap: usize) -> Result<GeodesicList> {
    let s = k.check_vertex(u)?;
    let t = k.check_vertex(v)?;
    let dv = bfs_from(k, &[t]);
    let Some(total) = dv[s] else {
        return Err(TsqError::Unreachable { from: u, to: v });
    };
    let count = count_geodesics_to(k, &dv, s, total);
    let mut paths = Vec::new();
    let mut stack = vec![(s, 0usize)];
    let mut darts = Vec::new();
    let mut overflow = false;
    // Iterative DFS: each frame remembers which out-dart to try next.
    while let Some(&mut (i, ref mut next)) = stack.last_mut() {
        let level = dv[i].unwrap();
        if level == 0 {
            if paths.len() == cap {
                overflow = true;
                break;
            }
            paths.push(PathSeq::from_darts(k, u, darts.clone()).expect("walk is a path"));
            stack.pop();
            darts.pop();
            continue;
        }
        let out = k.out_darts_at(i);
        let heads = k.heads_at(i);
        let mut advanced = false;
        while *next < out.len() {
            let j = heads[*next];
            let d = out[*next];
            *next += 1;
            if dv[j] == Some(level - 1) {
                darts.push(d);
                stack.push((j, 0));
                advanced = true;
                break;
            }
        }
        if !advanced {
            stack.pop();
            darts.pop();
        }
    }
    Ok(GeodesicList { paths, count, overflow })
}

/// Number of geodesics from vertex index `s` down a distance field `dv` that
/// vanishes at the target.
pub(crate) fn count_geodesics_to(k: &TsComplex, dv: &[Option<u32>], s: usize, total: u32) -> BigUint {
    // Layer by layer from the target outwards.
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); total as usize + 1];
    for (i, d) in dv.iter().enumerate() {
        if let Some(d) = *d {
            if d <= total {
                layers[d as usize].push(i);
            }
        }
    }
    let mut ways: Vec<BigUint> = vec![BigUint::ZERO; k.num_vertices()];
    for &i in &layers[0] {
        ways[i] = BigUint::from(1u32);
    }
    for (d, layer) in layers.iter().enumerate().take(total as usize + 1).skip(1) {
        for &i in layer {
            let mut w = BigUint::ZERO;
            for &j in k.heads_at(i) {
                if dv[j] == Some(d as u32 - 1) {
                    w += &ways[j];
                }
            }
            ways[i] = w;
        }
    }
    std::mem::take(&mut ways[s])
}

/// Smallest `k` with each path inside the closed `k`-neighbourhood of the
/// other.
pub fn subspace_distance(k: &TsComplex, p1: &PathSeq, p2: &PathSeq) -> u32 {
    one_sided(k, p1, p2).max(one_sided(k, p2, p1))
}

fn one_sided(k: &TsComplex, from: &PathSeq, to: &PathSeq) -> u32 {
    let sources: Vec<usize> = to.vertices.iter().map(|&v| k.vertex_index(v).expect("path vertex")).collect();
    let dist = bfs_from(k, &sources);
    from.vertices
        .iter()
        .map(|&v| dist[k.vertex_index(v).unwrap()].unwrap_or(u32::MAX))
        .max()
        .unwrap_or(0)
}

/// Maximum over integer times of the distance between the two clamped
/// parameterizations.
pub fn sync_distance(k: &TsComplex, p1: &PathSeq, p2: &PathSeq) -> u32 {
    let n = p1.len().max(p2.len());
    let mut best = 0;
    for t in 0..=n {
        let (a, b) = (p1.at(t), p2.at(t));
        if a != b {
            best = best.max(distance(k, a, b).unwrap_or(u32::MAX));
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FtReport {
    pub paths: (PathSeq, PathSeq),
    pub subspace: u32,
    pub sync: u32,
    pub separation: u32,
    pub bound: u32,
    pub holds: bool,
}

fn require_geodesic(k: &TsComplex, p: &PathSeq) -> Result<()> {
    let d = distance(k, p.start(), p.end())?;
    if p.len() != d as usize {
        return Err(TsqError::NotGeodesic { length: p.len(), distance: d });
    }
    Ok(())
}

/// Geodesics that are `k`-close as subspaces with starts `ℓ` apart must
/// synchronously fellow travel at distance `2k + ℓ`.
pub fn ft_geo_bound_check(k: &TsComplex, p1: &PathSeq, p2: &PathSeq) -> Result<FtReport> {
    require_geodesic(k, p1)?;
    require_geodesic(k, p2)?;
    let subspace = subspace_distance(k, p1, p2);
    let sync = sync_distance(k, p1, p2);
    let separation = distance(k, p1.start(), p2.start())?;
    let bound = 2 * subspace + separation;
    Ok(FtReport { paths: (p1.clone(), p2.clone()), subspace, sync, separation, bound, holds: sync <= bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{grid_vertex, square_grid};

    #[test]
    fn grid_distances() {
        let k = square_grid(4, 4);
        let g = |x, y| grid_vertex(4, x, y);
        assert_eq!(distance(&k, g(0, 0), g(3, 2)).unwrap(), 5);
        let f = distances(&k, g(0, 0)).unwrap();
        assert_eq!(f.get(&k, g(4, 4)), Some(8));
        assert_eq!(bounded_distance(&k, g(0, 0), g(4, 4), 7).unwrap(), None);
    }

    #[test]
    fn grid_geodesics() {
        let k = square_grid(4, 4);
        let g = |x, y| grid_vertex(4, x, y);
        let list = enumerate_geodesics(&k, g(0, 0), g(3, 2), 100).unwrap();
        assert_eq!(list.paths.len(), 10);
        assert_eq!(list.count, BigUint::from(10u32));
        assert!(!list.overflow);
        let mut sorted = list.paths.clone();
        sorted.sort_by(|a, b| a.darts.cmp(&b.darts));
        assert_eq!(sorted, list.paths);
        let capped = enumerate_geodesics(&k, g(0, 0), g(3, 2), 4).unwrap();
        assert_eq!((capped.paths.len(), capped.overflow), (4, true));
        let one = enumerate_geodesics(&k, g(1, 1), g(1, 1), 5).unwrap();
        assert_eq!(one.paths, vec![PathSeq::trivial(g(1, 1))]);
    }

    #[test]
    fn fellow_travel_examples() {
        let k = square_grid(4, 4);
        let g = |x, y| grid_vertex(4, x, y);
        let a = PathSeq::through(&k, &[g(0, 0), g(1, 0), g(1, 1)]).unwrap();
        let b = PathSeq::through(&k, &[g(0, 0), g(0, 1), g(1, 1)]).unwrap();
        assert_eq!(subspace_distance(&k, &a, &b), 1);
        // Opposite corners of a square are two edges apart at time 1.
        assert_eq!(sync_distance(&k, &a, &b), 2);
        assert_eq!(subspace_distance(&k, &a, &a), 0);
        let r = ft_geo_bound_check(&k, &a, &b).unwrap();
        assert_eq!((r.subspace, r.separation, r.sync, r.bound, r.holds), (1, 0, 2, 2, true));
        let row0 = PathSeq::through(&k, &[g(0, 0), g(1, 0), g(2, 0), g(3, 0), g(4, 0)]).unwrap();
        let row3 = PathSeq::through(&k, &[g(0, 3), g(1, 3), g(2, 3), g(3, 3), g(4, 3)]).unwrap();
        assert_eq!(subspace_distance(&k, &row0, &row3), 3);
        let back = PathSeq::through(&k, &[g(0, 0), g(1, 0), g(2, 0), g(1, 0), g(2, 0)]).unwrap();
        let straight = PathSeq::through(&k, &[g(0, 0), g(1, 0), g(2, 0)]).unwrap();
        assert_eq!(sync_distance(&k, &back, &straight), 1);
        assert!(matches!(ft_geo_bound_check(&k, &back, &straight), Err(TsqError::NotGeodesic { .. })));
    }
}
