use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use g2fib_bench::{germs, graphs, pencils};
use g2fib_core::localsing::residue_index_oracle;
use g2fib_core::{
    enumerate_catalog, holonomy_report, multiplicity_search, resolve_pencil, separatrix_index, solve_indices,
    CatalogBounds,
};

fn indices(c: &mut Criterion) {
    let gs = graphs();
    c.bench_function("solve_indices", |b| b.iter(|| gs.iter().map(|g| solve_indices(black_box(g)).is_ok()).count()));
    c.bench_function("holonomy_report", |b| b.iter(|| gs.iter().map(|g| holonomy_report(black_box(g)).is_ok()).count()));
}

fn germ_kernels(c: &mut Criterion) {
    let hs = germs();
    c.bench_function("separatrix_index", |b| {
        b.iter(|| hs.iter().flat_map(|h| h.factors.iter().map(move |&(br, _)| separatrix_index(black_box(h), br))).count())
    });
    c.bench_function("residue_index_oracle", |b| {
        b.iter(|| {
            hs.iter()
                .flat_map(|h| h.factors.iter().filter(|(br, _)| br.is_smooth()).map(move |&(br, _)| residue_index_oracle(h, br)))
                .count()
        })
    });
}

fn resolution(c: &mut Criterion) {
    let ps = pencils();
    c.bench_function("resolve_pencil", |b| b.iter(|| ps.iter().map(|p| resolve_pencil(black_box(p)).blowups).sum::<usize>()));
}

fn search(c: &mut Criterion) {
    c.bench_function("multiplicity_search_m4_d64", |b| b.iter(|| multiplicity_search(black_box(4), 64)));
    let mut g = c.benchmark_group("catalog");
    g.sample_size(10);
    g.bench_function("enumerate_catalog_default", |b| b.iter(|| enumerate_catalog(CatalogBounds::default()).len()));
    g.finish();
}

criterion_group!(benches, indices, germ_kernels, resolution, search);
criterion_main!(benches);
