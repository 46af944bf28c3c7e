use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use sparsepr::{gaussian_ensemble, has_complement_property, has_k_complement_property};

fn complement(c: &mut Criterion) {
    let mut g = c.benchmark_group("complement");
    for m in [3usize, 4, 5, 6] {
        let phi = gaussian_ensemble(m, 2 * m - 1, 7).unwrap();
        g.bench_with_input(BenchmarkId::new("holds", m), &phi, |b, phi| {
            b.iter(|| has_complement_property(black_box(phi)).unwrap())
        });
        let short = gaussian_ensemble(m, 2 * m - 2, 7).unwrap();
        g.bench_with_input(BenchmarkId::new("violated", m), &short, |b, phi| {
            b.iter(|| has_complement_property(black_box(phi)).unwrap())
        });
    }
    g.finish();
}

fn k_complement(c: &mut Criterion) {
    let mut g = c.benchmark_group("k_complement");
    g.sample_size(10);
    for (m, k) in [(6usize, 1usize), (8, 2)] {
        let phi = gaussian_ensemble(m, 4 * k - 1, 3).unwrap();
        g.bench_with_input(BenchmarkId::new(format!("m{m}"), 2 * k), &phi, |b, phi| {
            b.iter(|| has_k_complement_property(black_box(phi), 2 * k).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, complement, k_complement);
criterion_main!(benches);
