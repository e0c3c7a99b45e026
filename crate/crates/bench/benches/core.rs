use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use logpair_core::catalog::{family_data, run_conic_example};
use logpair_core::dualgraph::build;
use logpair_core::peeling::bark;
use logpair_core::search::example4_search;
use logpair_core::zariski::zariski_decompose;
use logpair_core::{DivisorClass, DualGraph, SearchSpec, SurfaceModel};

/// A `(-1)` hub carrying three `(-2)`-chains of length `len`.
fn comb(len: usize) -> DualGraph {
    let mut vs = vec![build::v("hub", 0, -1)];
    let mut es = Vec::new();
    for p in ["a", "b", "c"] {
        let (cv, ce) = build::chain(p, &vec![-2; len]);
        es.push(build::e("hub", &format!("{p}{}", len - 1), 1));
        vs.extend(cv);
        es.extend(ce);
    }
    DualGraph::new(vs, es).expect("comb graph")
}

fn bench_bark(c: &mut Criterion) {
    let mut group = c.benchmark_group("bark");
    for len in [4, 16, 64] {
        let g = comb(len);
        group.bench_with_input(BenchmarkId::from_parameter(len), &g, |b, g| b.iter(|| bark(black_box(g))));
    }
    group.finish();
}

fn bench_zariski(c: &mut Criterion) {
    let mut group = c.benchmark_group("zariski");
    for n in [4usize, 8, 16] {
        let m = SurfaceModel::plane(n);
        let cands: Vec<DivisorClass> = (1..=n).map(|i| m.exceptional(i)).collect();
        let mut coeffs = vec![1];
        coeffs.extend((0..n as i64).map(|i| i % 3 + 1));
        let x = DivisorClass::from_i64(&coeffs);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(m, x, cands), |b, (m, x, cands)| {
            b.iter(|| zariski_decompose(black_box(m), black_box(x), black_box(cands)))
        });
    }
    let (m, d, g) = family_data(6).expect("family");
    let cands = vec![g];
    group.bench_function("family_a6", |b| b.iter(|| zariski_decompose(&m, black_box(&d), &cands)));
    group.finish();
}

fn bench_examples(c: &mut Criterion) {
    c.bench_function("conic_example", |b| b.iter(run_conic_example));
    let spec = SearchSpec { g: 8..=40, x: 5..=12, y: 0..=5, e: None, all_rows: false };
    c.bench_function("search_grid", |b| b.iter(|| example4_search(black_box(&spec))));
}

criterion_group!(benches, bench_bark, bench_zariski, bench_examples);
criterion_main!(benches);
