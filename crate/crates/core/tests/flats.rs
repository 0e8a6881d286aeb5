mod common;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use common::windows;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsq_core::flats::{
    classify, coloring, embed, gen_radial_y, gen_striped, isom_embed_check, project, region_is_convex, regions,
    vertex_type, Color, FlatClass, Keep, VertexType,
};
use tsq_core::flats::{develop_torus, snub_torus};
use tsq_core::{distance, CellKind, Document, EPoint, FlatWindow, VertexId};

fn corpus() -> Vec<FlatWindow> {
    let mut out: Vec<FlatWindow> = windows(9).into_iter().map(|(_, f)| f).collect();
    out.push(gen_radial_y(3, [1, 1, 1]).unwrap());
    out
}

#[test]
fn deep_vertices_are_flat() {
    for f in corpus() {
        f.verify().unwrap();
        for v in f.deep_vertices(1) {
            assert_eq!(f.complex.angle_sum(v), 12);
        }
    }
}

#[test]
fn regions_are_convex() {
    for f in corpus() {
        let rd = regions(&f);
        for r in &rd.regions {
            assert!(region_is_convex(&f, r), "region {} of {:?}", r.id, f.window);
        }
        assert_eq!(rd.cell_region.len(), f.complex.cells().len());
    }
}

/// Vertices share a blue image exactly when red edges join them.
#[test]
fn projection_fibers_are_red_components() {
    for f in corpus() {
        let k = &f.complex;
        let col = coloring(&f).unwrap();
        let pb = project(&f, Keep::Blue).unwrap();
        let mut comp: BTreeMap<VertexId, usize> = BTreeMap::new();
        for &s in k.vertices() {
            if comp.contains_key(&s) {
                continue;
            }
            let id = comp.len();
            comp.insert(s, id);
            let mut queue = VecDeque::from([s]);
            while let Some(a) = queue.pop_front() {
                for &d in k.out_darts(a) {
                    let b = k.head(d);
                    if col.edges[&d.edge] == Color::Red && !comp.contains_key(&b) {
                        comp.insert(b, id);
                        queue.push_back(b);
                    }
                }
            }
        }
        let mut fiber: BTreeMap<_, BTreeSet<usize>> = BTreeMap::new();
        for (&v, &p) in &pb {
            fiber.entry(p).or_default().insert(comp[&v]);
        }
        assert!(fiber.values().all(|c| c.len() == 1));
        for e in k.edges() {
            let [a, b] = e.ends;
            let d = pb[&a].dist(pb[&b]);
            match col.edges[&e.id] {
                Color::Blue => assert_eq!(d, 1),
                _ => assert_eq!(d, 0),
            }
        }
    }
}

/// Both projections of a crumpled window cover a hexagon around the image
/// of its centre, on vertices and on edges.
#[test]
fn projections_are_onto_near_the_centre() {
    let f = develop_torus(&snub_torus(), 14).unwrap();
    for keep in [Keep::Blue, Keep::Red] {
        let p = project(&f, keep).unwrap();
        let c = p[&f.center()];
        let hit: BTreeSet<EPoint> = p.values().copied().collect();
        let mut edges: BTreeSet<(EPoint, EPoint)> = BTreeSet::new();
        for e in f.complex.edges() {
            let [a, b] = e.ends.map(|v| p[&v]);
            edges.insert((a.min(b), a.max(b)));
        }
        for x in -4..=4 {
            for y in -4..=4 {
                let q = c + EPoint::new(x, y);
                if q.dist(c) > 3 {
                    continue;
                }
                assert!(hit.contains(&q), "{keep:?} misses {q:?}");
                for s in EPoint::steps() {
                    let r = q + s;
                    assert!(edges.contains(&(q.min(r), q.max(r))), "{keep:?} misses an edge at {q:?}");
                }
            }
        }
    }
}

/// Kept edges with one image form a single strip of squares joined across
/// opposite sides.
#[test]
fn edge_fibers_are_square_strips() {
    for f in corpus() {
        let k = &f.complex;
        let col = coloring(&f).unwrap();
        let pb = project(&f, Keep::Blue).unwrap();
        let mut uf = petgraph::unionfind::UnionFind::<usize>::new(k.edges().len());
        let pos = |e| k.edges().iter().position(|x| x.id == e).unwrap();
        for c in k.cells().iter().filter(|c| c.kind == CellKind::Square) {
            for i in 0..2 {
                let (a, b) = (c.boundary[i].edge, c.boundary[i + 2].edge);
                if col.edges[&a] == Color::Blue {
                    uf.union(pos(a), pos(b));
                }
            }
        }
        let mut fiber: BTreeMap<(EPoint, EPoint), BTreeSet<usize>> = BTreeMap::new();
        for (i, e) in k.edges().iter().enumerate() {
            if col.edges[&e.id] == Color::Blue {
                let [a, b] = e.ends.map(|v| pb[&v]);
                fiber.entry((a.min(b), a.max(b))).or_default().insert(uf.find(i));
            }
        }
        assert!(fiber.values().all(|s| s.len() == 1));
    }
}

#[test]
fn embedding_is_injective_and_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for f in corpus() {
        let emb = embed(&f).unwrap();
        let images: BTreeSet<_> = emb.values().collect();
        assert_eq!(images.len(), emb.len());
        let deep = f.deep_vertices(2);
        let pairs: Vec<_> = (0..100).map(|_| (*deep.choose(&mut rng).unwrap(), *deep.choose(&mut rng).unwrap())).collect();
        let rep = isom_embed_check(&f, &pairs).unwrap();
        assert!(rep.ok(), "{:?}", rep.failures);
        for &(u, v) in &pairs {
            let d = distance(&f.complex, u, v).unwrap();
            if f.margin(u).max(f.margin(v)) >= d {
                assert_eq!(emb[&u].b.dist(emb[&v].b) + emb[&u].r.dist(emb[&v].r), d as i64);
            }
        }
    }
}

#[test]
fn radial_census() {
    let f = gen_radial_y(4, [1, 1, 1]).unwrap();
    let c = classify(&f).unwrap();
    assert_eq!(c.class, FlatClass::Radial);
    assert_eq!((c.corners, c.square_regions, c.triangle_regions, c.bounded_regions), (3, 3, 4, 1));
}

#[test]
fn flat_round_trips_through_json() {
    for f in corpus() {
        let text = Document::from_flat(&f).to_json();
        let g = Document::parse(&text).unwrap().flat().unwrap();
        assert_eq!(g.complex.to_data(), f.complex.to_data());
        assert_eq!(g.coords, f.coords);
        assert_eq!(g.translations, f.translations);
    }
}

fn stripes() -> impl Strategy<Value = Vec<(CellKind, u32)>> {
    prop::collection::vec((1u32..4, 1u32..4), 1..3)
        .prop_map(|ws| ws.into_iter().flat_map(|(s, t)| [(CellKind::Square, s), (CellKind::Triangle, t)]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Parallel strips: no corner vertex, every region convex and unbounded.
    #[test]
    fn striped_windows_are_striped(spec in stripes()) {
        let f = gen_striped(&spec, 10).unwrap();
        let c = classify(&f).unwrap();
        prop_assert_eq!(c.class, FlatClass::Striped);
        prop_assert_eq!(c.corners, 0);
        let rd = regions(&f);
        for r in &rd.regions {
            prop_assert!(!r.bounded);
            prop_assert!(region_is_convex(&f, r));
        }
        for v in f.deep_vertices(1) {
            prop_assert_ne!(vertex_type(&f, v).unwrap(), VertexType::Corner);
        }
    }
}
