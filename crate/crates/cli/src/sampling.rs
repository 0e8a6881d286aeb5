//! Seeded sampling of paths and vertex pairs inside flat windows.

use rand::seq::SliceRandom;
use rand::Rng;
use tsq_core::{distance, FlatWindow, PathSeq, Result, TsqError, VertexId};

/// Random edge walk of `len` steps from a vertex at least `len + 1` deep.
pub fn random_walk<R: Rng>(f: &FlatWindow, len: usize, rng: &mut R) -> Result<PathSeq> {
    let k = &f.complex;
    let deep = f.deep_vertices(len as u32 + 1);
    let start = *deep.choose(rng).ok_or_else(|| TsqError::Flat(format!("no vertex {} deep", len + 1)))?;
    let mut v = start;
    let mut darts = Vec::with_capacity(len);
    for _ in 0..len {
        let d = *k.out_darts(v).choose(rng).expect("flat vertices have edges");
        darts.push(d);
        v = k.head(d);
    }
    PathSeq::from_darts(k, start, darts)
}

/// Endpoints of a random walk: two deep vertices at most `max_d` apart.
pub fn near_pair<R: Rng>(f: &FlatWindow, max_d: u32, rng: &mut R) -> Result<(VertexId, VertexId)> {
    let p = random_walk(f, max_d as usize, rng)?;
    Ok((p.start(), p.end()))
}

/// A long pair for the linearity probe: `u` at least half the window deep
/// and `v` no farther from `u` than the margin of `u`.
pub fn long_pair<R: Rng>(f: &FlatWindow, rng: &mut R) -> Result<(VertexId, VertexId)> {
    let m = f.max_margin();
    let deep = f.deep_vertices(m / 2);
    let u = *deep.choose(rng).ok_or_else(|| TsqError::Flat("window is too small".into()))?;
    let reach = f.margin(u);
    for _ in 0..64 {
        let v = *deep.choose(rng).unwrap();
        if v != u && distance(&f.complex, u, v)? <= reach {
            return Ok((u, v));
        }
    }
    Err(TsqError::Flat("no partner found for a long pair".into()))
}

/// Distinct vertex pairs drawn uniformly from the whole window.
pub fn any_pairs<R: Rng>(f: &FlatWindow, n: usize, rng: &mut R) -> Vec<(VertexId, VertexId)> {
    let vs = f.complex.vertices();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (a, b) = (*vs.choose(rng).unwrap(), *vs.choose(rng).unwrap());
        if a != b {
            out.push((a, b));
        }
    }
    out
}
