use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tsq_core::curvature::{is_cat0_gate, Cat0Gate};
use tsq_core::diagram::random_disc;
use tsq_core::flats::{develop_torus, gen_eisenstein, gen_gaussian, gen_radial_y, gen_striped, snub_torus};
use tsq_core::{curvature_ledger, euler_characteristic, AngledDiagram, CellKind, FlatWindow};

fn corpus() -> Vec<FlatWindow> {
    vec![
        gen_gaussian(4).unwrap(),
        gen_eisenstein(4).unwrap(),
        gen_striped(&[(CellKind::Square, 1), (CellKind::Triangle, 2)], 6).unwrap(),
        gen_radial_y(2, [1, 1, 1]).unwrap(),
        develop_torus(&snub_torus(), 6).unwrap(),
    ]
}

fn fuzzed(count: usize, seed: u64) -> Vec<AngledDiagram> {
    let flats = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < count {
        let f = &flats[i % flats.len()];
        let size = 1 + (i * 7) % 40;
        if let Some(d) = random_disc(&f.complex, &f.coord_map(), size, &mut rng) {
            out.push(d);
        }
        i += 1;
    }
    out
}

#[test]
fn gauss_bonnet_on_two_hundred_diagrams() {
    for d in fuzzed(200, 7) {
        let l = curvature_ledger(&d);
        assert_eq!(l.total, 12 * euler_characteristic(d.complex()));
        assert_eq!(l.total, 12 * l.euler);
        assert!(l.identity_holds);
    }
}

#[test]
fn certified_discs_have_boundary_curvature_at_least_a_full_turn() {
    let mut certified = 0;
    for d in fuzzed(200, 11) {
        if is_cat0_gate(d.complex()) == Cat0Gate::Certified {
            certified += 1;
            let l = curvature_ledger(&d);
            assert!(l.interior_total <= 0);
            assert!(l.boundary_total >= 12, "boundary total {}", l.boundary_total);
        }
    }
    assert!(certified > 100);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curvature_totals_match_euler(seed in any::<u64>(), w in 0..5usize, size in 1usize..60) {
        let f = &corpus()[w];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(d) = random_disc(&f.complex, &f.coord_map(), size, &mut rng) {
            let l = curvature_ledger(&d);
            let vsum: i64 = l.vertices.iter().map(|v| v.curvature).sum();
            let csum: i64 = l.cells.iter().map(|c| c.1).sum();
            prop_assert_eq!(vsum + csum, l.total);
            prop_assert_eq!(l.total, 12 * euler_characteristic(d.complex()));
        }
    }
}
