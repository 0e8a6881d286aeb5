//! Shared fixtures for benchmarks.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsq_core::flats::{develop_torus, snub_torus};
use tsq_core::{FlatWindow, PathSeq, VertexId};

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(7)
}

pub fn snub(radius: i64) -> FlatWindow {
    develop_torus(&snub_torus(), radius).expect("snub window")
}

/// Random walks of length `len` starting deep enough to stay inside.
pub fn walks(f: &FlatWindow, len: usize, count: usize) -> Vec<PathSeq> {
    let mut rng = rng();
    let k = &f.complex;
    let deep = f.deep_vertices(len as u32 + 1);
    (0..count)
        .map(|_| {
            let start = *deep.choose(&mut rng).unwrap();
            let mut v = start;
            let mut darts = Vec::with_capacity(len);
            for _ in 0..len {
                let d = *k.out_darts(v).choose(&mut rng).unwrap();
                darts.push(d);
                v = k.head(d);
            }
            PathSeq::from_darts(k, start, darts).unwrap()
        })
        .collect()
}

/// The centre and a deep vertex at least `d` away from it.
pub fn far_pair(f: &FlatWindow, d: u32) -> (VertexId, VertexId) {
    let c = f.center();
    let v = f
        .deep_vertices(2)
        .into_iter()
        .find(|&v| tsq_core::distance(&f.complex, c, v).unwrap() >= d)
        .expect("window too small");
    (c, v)
}
