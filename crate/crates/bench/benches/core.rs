use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use tsq_bench::{far_pair, rng, snub, walks};
use tsq_core::flats::{embed, ft_probe};
use tsq_core::{check_npc, choke_chain, interval, straighten};

fn npc(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_npc");
    for r in [10, 20] {
        let f = snub(r);
        g.bench_with_input(BenchmarkId::from_parameter(r), &f, |b, f| b.iter(|| check_npc(black_box(&f.complex))));
    }
    g.finish();
}

fn intervals(c: &mut Criterion) {
    let f = snub(20);
    let (u, v) = far_pair(&f, 12);
    c.bench_function("intervals/interval", |b| b.iter(|| interval(&f.complex, u, v).unwrap()));
    c.bench_function("intervals/choke_chain", |b| b.iter(|| choke_chain(&f.complex, u, v).unwrap()));
}

fn straightening(c: &mut Criterion) {
    let f = snub(16);
    let ws = walks(&f, 10, 16);
    c.bench_function("moves/straighten", |b| {
        b.iter(|| {
            for w in &ws {
                black_box(straighten(&f.complex, w).unwrap());
            }
        })
    });
}

fn flats(c: &mut Criterion) {
    let f = snub(16);
    c.bench_function("flats/embed", |b| b.iter(|| embed(&f).unwrap()));
    c.bench_function("flats/ft_probe", |b| b.iter(|| ft_probe(&f, 1, 10, &mut rng()).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = npc, intervals, straightening, flats
}
criterion_main!(benches);
