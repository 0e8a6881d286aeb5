#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use tsq_core::flats::{develop_torus, gen_eisenstein, gen_gaussian, gen_striped, snub_torus};
use tsq_core::{CellKind, FlatWindow, PathSeq, VertexId};

/// Gaussian, Eisenstein, striped and a crumpled developed torus.
pub fn windows(radius: i64) -> Vec<(&'static str, FlatWindow)> {
    vec![
        ("gaussian", gen_gaussian(radius).unwrap()),
        ("eisenstein", gen_eisenstein(radius).unwrap()),
        ("striped", gen_striped(&[(CellKind::Square, 1), (CellKind::Triangle, 1)], radius).unwrap()),
        ("snub", develop_torus(&snub_torus(), radius).unwrap()),
    ]
}

/// A random edge walk of `len` steps starting at a vertex with margin at
/// least `len`, so the walk and its geodesics stay inside the window.
pub fn random_walk<R: Rng>(f: &FlatWindow, len: usize, rng: &mut R) -> PathSeq {
    let k = &f.complex;
    let start = *f.deep_vertices(len as u32 + 1).choose(rng).expect("window too small");
    let mut v = start;
    let mut darts = Vec::with_capacity(len);
    for _ in 0..len {
        let d = *k.out_darts(v).choose(rng).unwrap();
        darts.push(d);
        v = k.head(d);
    }
    PathSeq::from_darts(k, start, darts).unwrap()
}

/// Two deep vertices at most `max_d` apart.
pub fn deep_pair<R: Rng>(f: &FlatWindow, max_d: u32, rng: &mut R) -> (VertexId, VertexId) {
    let p = random_walk(f, max_d as usize, rng);
    (p.start(), p.end())
}
