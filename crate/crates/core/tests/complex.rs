use std::collections::BTreeMap;

use proptest::prelude::*;
use tsq_core::catalog;
use tsq_core::flats::{gen_eisenstein, gen_gaussian, gen_striped};
use tsq_core::{
    check_npc, distance, subcomplex, validate, vertex_link, CellKind, ComplexData, Document, TsComplex, VertexId,
};

fn windows() -> Vec<TsComplex> {
    vec![
        gen_gaussian(3).unwrap().complex,
        gen_eisenstein(3).unwrap().complex,
        gen_striped(&[(CellKind::Square, 1), (CellKind::Triangle, 1)], 4).unwrap().complex,
    ]
}

fn relabel(data: &ComplexData, perm: &BTreeMap<VertexId, VertexId>) -> ComplexData {
    let mut out = data.clone();
    out.vertices = out.vertices.iter().map(|v| perm[v]).collect();
    for e in &mut out.edges {
        e.ends = e.ends.map(|v| perm[&v]);
    }
    out
}

fn subset_strategy() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (0..3usize, prop::collection::vec(any::<bool>(), 128))
}

#[test]
fn catalog_is_valid() {
    for k in [
        catalog::single_square(),
        catalog::single_triangle(),
        catalog::cube_corner(),
        catalog::square_torus(),
        catalog::triangle_torus(),
        catalog::hexagon(),
        catalog::rhombus(),
    ] {
        assert!(validate(&k.to_data()).is_valid());
    }
}

#[test]
fn links_count_corners() {
    for k in windows() {
        let corners: usize = k.cells().iter().map(|c| c.kind.sides()).sum();
        let link_edges: usize = k.vertices().iter().map(|&v| vertex_link(&k, v).unwrap().edges.len()).sum();
        assert_eq!(corners, link_edges);
        for &v in k.vertices() {
            let link = vertex_link(&k, v).unwrap();
            assert_eq!(link.nodes.len(), k.out_darts(v).len());
            assert_eq!(link.total_weight(), k.angle_sum(v));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subcomplex_is_idempotent((w, mask) in subset_strategy()) {
        let k = &windows()[w];
        let keep: Vec<VertexId> = k.vertices().iter().zip(mask.iter().cycle()).filter(|(_, &m)| m).map(|(&v, _)| v).collect();
        let once = subcomplex(k, &keep).unwrap();
        let twice = subcomplex(&once, &keep).unwrap();
        prop_assert_eq!(once.to_data(), twice.to_data());
        prop_assert!(validate(&once.to_data()).is_valid());
        // Subcomplexes of a flat stay nonpositively curved.
        prop_assert!(check_npc(&once).is_npc());
    }

    #[test]
    fn relabeling_preserves_verdict_and_distances(w in 0..3usize, shift in 1u32..1000, seed in any::<u64>()) {
        let k = &windows()[w];
        let mut ids: Vec<VertexId> = k.vertices().to_vec();
        let n = ids.len();
        ids.rotate_left((seed % n as u64) as usize);
        let perm: BTreeMap<VertexId, VertexId> = k.vertices().iter().zip(&ids).map(|(&a, &b)| (a, b + shift)).collect();
        let r = TsComplex::new(relabel(&k.to_data(), &perm)).unwrap();
        prop_assert_eq!(check_npc(k).is_npc(), check_npc(&r).is_npc());
        let vs = k.vertices();
        for (i, &a) in vs.iter().enumerate().step_by(5) {
            let b = vs[(i * 7 + seed as usize) % n];
            prop_assert_eq!(distance(k, a, b).unwrap(), distance(&r, perm[&a], perm[&b]).unwrap());
        }
    }

    #[test]
    fn triangle_inequality(w in 0..3usize, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
        let k = &windows()[w];
        let vs = k.vertices();
        let (x, y, z) = (vs[a.index(vs.len())], vs[b.index(vs.len())], vs[c.index(vs.len())]);
        let d = |p, q| distance(k, p, q).unwrap();
        prop_assert!(d(x, z) <= d(x, y) + d(y, z));
        prop_assert_eq!(d(x, y), d(y, x));
        prop_assert_eq!(d(x, x), 0);
    }

    #[test]
    fn json_round_trip(w in 0..3usize) {
        let k = &windows()[w];
        let doc = Document::from_complex(k);
        let back = Document::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(back.complex().unwrap().to_data(), k.to_data());
    }
}
