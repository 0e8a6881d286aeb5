mod common;

use common::{deep_pair, random_walk, windows};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tsq_core::metric::enumerate_geodesics;
use tsq_core::moves::{apply_move, find_path_moves, geodesic_move_graph};
use tsq_core::{distance, straighten};

#[test]
fn walks_straighten_to_bfs_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, f) in windows(16) {
        for _ in 0..100 {
            let len = rng.gen_range(0..=12);
            let walk = random_walk(&f, len, &mut rng);
            let s = straighten(&f.complex, &walk).unwrap();
            let d = distance(&f.complex, walk.start(), walk.end()).unwrap() as usize;
            assert_eq!(s.geodesic.len(), d, "{name}: {walk}");
            assert_eq!(s.replay().unwrap(), s.geodesic, "{name}");
            assert_eq!((s.geodesic.start(), s.geodesic.end()), (walk.start(), walk.end()));
        }
    }
}

#[test]
fn geodesic_move_graphs_are_connected() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, f) in windows(12) {
        for _ in 0..50 {
            let (u, v) = deep_pair(&f, 6, &mut rng);
            let g = geodesic_move_graph(&f.complex, u, v, 5000).unwrap();
            assert!(g.connected, "{name}: {u} -> {v}");
            let all = enumerate_geodesics(&f.complex, u, v, 5000).unwrap();
            assert_eq!(g.nodes.len(), all.paths.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every detected move keeps endpoints and changes length as its kind says.
    #[test]
    fn moves_preserve_endpoints(seed in any::<u64>(), w in 0..4usize, len in 1usize..10) {
        let (_, f) = &windows(12)[w];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_walk(f, len, &mut rng);
        for mv in find_path_moves(&f.complex, &p) {
            let q = apply_move(&p, &mv).unwrap();
            prop_assert_eq!((q.start(), q.end()), (p.start(), p.end()));
            prop_assert_eq!(q.len() as i64 - p.len() as i64, mv.kind.length_change());
        }
    }

    #[test]
    fn straightening_is_deterministic(seed in any::<u64>(), w in 0..4usize) {
        let (_, f) = &windows(12)[w];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_walk(f, 8, &mut rng);
        let a = straighten(&f.complex, &p).unwrap();
        let b = straighten(&f.complex, &p).unwrap();
        prop_assert_eq!(a.geodesic, b.geodesic);
        prop_assert_eq!(a.script.len(), b.script.len());
    }
}
