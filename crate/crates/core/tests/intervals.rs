mod common;

use std::collections::BTreeSet;

use common::{deep_pair, windows};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsq_core::catalog::{grid_vertex, square_grid};
use tsq_core::curvature::{is_cat0_gate, Cat0Gate};
use tsq_core::intervals::{
    family_subspace_max, family_sync_max, initial_link, interval_cat0_check, interval_edge_check, InitialLink,
};
use tsq_core::metric::{subspace_distance, sync_distance};
use tsq_core::{choke_chain, distance, gs_geodesics, interval};

#[test]
fn gaussian_chain() {
    let k = square_grid(5, 5);
    let g = |x, y| grid_vertex(5, x, y);
    let fam = gs_geodesics(&k, g(0, 0), g(3, 2), 100).unwrap();
    assert_eq!(fam.chain.vertices, vec![g(0, 0), g(1, 1), g(2, 2), g(3, 2)]);
    assert_eq!(fam.count, BigUint::from(4u32));
    assert_eq!(fam.paths.len(), 4);
}

#[test]
fn sampled_intervals_are_healthy() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (name, f) in windows(12) {
        for _ in 0..25 {
            let (u, v) = deep_pair(&f, 7, &mut rng);
            let iv = interval(&f.complex, u, v).unwrap();
            assert!(interval_cat0_check(&iv).ok(), "{name}: {u} -> {v}");
            assert_eq!(is_cat0_gate(&iv.complex), Cat0Gate::Certified);
            let edges = interval_edge_check(&iv);
            assert!(edges.ok(), "{name}: {:?}", edges.violations);
            if u != v {
                // At most two first darts, and two only across a cell.
                if let InitialLink::Pair { darts, cell } = initial_link(&iv).unwrap() {
                    let c = f.complex.cell(cell).unwrap();
                    assert_ne!(darts[0], darts[1]);
                    assert!(darts.iter().all(|d| c.boundary.iter().any(|b| b.edge == d.edge)));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gs_family_is_a_cube_of_geodesics(seed in any::<u64>(), w in 0..4usize, len in 1u32..9) {
        let (_, f) = &windows(12)[w];
        let k = &f.complex;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = deep_pair(f, len, &mut rng);
        let fam = gs_geodesics(k, u, v, 1 << 12).unwrap();
        prop_assert!(!fam.overflow);
        prop_assert_eq!(fam.count.clone(), BigUint::from(1u32) << fam.chain.move_steps());
        let d = distance(k, u, v).unwrap() as usize;
        let distinct: BTreeSet<_> = fam.paths.iter().cloned().collect();
        prop_assert_eq!(distinct.len(), fam.paths.len());
        for p in &fam.paths {
            prop_assert_eq!(p.len(), d);
            prop_assert_eq!((p.start(), p.end()), (u, v));
            // Each choke point is visited at its distance from u.
            for &c in &fam.chain.vertices {
                let t = distance(k, u, c).unwrap() as usize;
                prop_assert_eq!(p.at(t), c);
            }
        }
    }

    /// The exact family maxima agree with brute force over all path pairs.
    #[test]
    fn family_metrics_match_brute_force(seed in any::<u64>(), w in 0..4usize, len in 1u32..7) {
        let (_, f) = &windows(12)[w];
        let k = &f.complex;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = deep_pair(f, len, &mut rng);
        let (x, y) = deep_pair(f, len, &mut rng);
        let a = gs_geodesics(k, u, v, 256).unwrap();
        let b = gs_geodesics(k, x, y, 256).unwrap();
        prop_assume!(!a.overflow && !b.overflow);
        let mut sync = 0;
        let mut sub = 0;
        for p in &a.paths {
            for q in &b.paths {
                sync = sync.max(sync_distance(k, p, q));
                sub = sub.max(subspace_distance(k, p, q));
            }
        }
        prop_assert_eq!(family_sync_max(k, &a.chain, &b.chain), sync);
        prop_assert_eq!(family_subspace_max(k, &a.chain, &b.chain), sub);
    }

    #[test]
    fn chain_length_is_distance(seed in any::<u64>(), w in 0..4usize) {
        let (_, f) = &windows(12)[w];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v) = deep_pair(f, 6, &mut rng);
        let c = choke_chain(&f.complex, u, v).unwrap();
        prop_assert_eq!(c.len() as u32, distance(&f.complex, u, v).unwrap());
    }
}
