use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ilm_bench::{alternating_c4, build};
use ilm_core::metrics::clustering_coefficient;
use ilm_core::params::{chromatic_number, domination_number};
use ilm_core::spectral::spectrum;
use ilm_core::structure::{hamiltonian, HamiltonOptions};
use ilm_core::{generate, named, Graph, Limits, Sequence};

fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    let seq = Sequence::parse("(01)*").unwrap();
    for t in [6, 8, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| generate(&named::cycle(4), &seq, t, &Limits::default()).unwrap())
        });
    }
    group.finish();
}

fn spectra(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(10);
    for t in [3, 5, 6] {
        let g = alternating_c4(t);
        group.bench_with_input(BenchmarkId::from_parameter(g.n()), &g, |b, g| b.iter(|| spectrum(black_box(g)).unwrap()));
    }
    group.finish();
}

fn hamiltonicity(c: &mut Criterion) {
    let opts = HamiltonOptions::default();
    let mut group = c.benchmark_group("hamiltonian");
    for t in [4, 6, 8] {
        let g = build(&named::cycle(5), "(00)*", t);
        group.bench_with_input(BenchmarkId::from_parameter(g.n()), &g, |b, g| b.iter(|| hamiltonian(black_box(g), &opts).unwrap()));
    }
    group.finish();
}

fn chromatic(c: &mut Criterion) {
    // Lineage removed so the search runs without the seed bracket.
    let strip = |g: &Graph| Graph::from_edges(g.n(), &g.edges().collect::<Vec<_>>()).unwrap();
    let g = strip(&build(&named::complete(1), "0101", 4));
    let petersen = named::petersen();
    let mut group = c.benchmark_group("chromatic");
    group.bench_function("ilm4_k1", |b| b.iter(|| chromatic_number(black_box(&g), 1 << 24)));
    group.bench_function("petersen", |b| b.iter(|| chromatic_number(black_box(&petersen), 1 << 24)));
    group.finish();
}

fn domination(c: &mut Criterion) {
    let g = alternating_c4(6);
    c.bench_function("domination/c4_alt_256", |b| b.iter(|| domination_number(black_box(&g), 3).unwrap()));
}

fn clustering(c: &mut Criterion) {
    let mut group = c.benchmark_group("clustering");
    for t in [4, 6, 8] {
        let g = alternating_c4(t);
        group.bench_with_input(BenchmarkId::from_parameter(g.n()), &g, |b, g| b.iter(|| clustering_coefficient(black_box(g)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, generation, spectra, hamiltonicity, chromatic, domination, clustering);
criterion_main!(benches);
