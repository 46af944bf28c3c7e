use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use sparsepr::{
    autocorrelation, fmm_recover, fourier_rows, gaussian_ensemble, intensity_measure, l0_recover,
    signal_from_autocorrelation, RealSignal,
};

fn lifted(c: &mut Criterion) {
    let phi = gaussian_ensemble(8, 7, 11).unwrap();
    let x0 = RealSignal::from_entries(8, &[(2, 1.3), (6, -0.7)]).unwrap();
    let y = intensity_measure(&phi, &x0).unwrap();
    c.bench_function("l0_recover m8 k2", |b| {
        b.iter(|| l0_recover(black_box(&phi), black_box(&y), 2).unwrap())
    });
}

fn fmm(c: &mut Criterion) {
    let x0 = RealSignal::from_entries(9, &[(2, 2.0), (3, -1.0), (7, 3.0)]).unwrap();
    let freqs: Vec<usize> = (0..17).collect();
    let y = intensity_measure(&fourier_rows(9, &freqs).unwrap(), &x0).unwrap();
    c.bench_function("fmm_recover m9 k3 n17", |b| {
        b.iter(|| fmm_recover(black_box(&y), &freqs, 9, 3).unwrap())
    });

    let x = RealSignal::from_entries(24, &[(0, 1.0), (1, -2.0), (4, 3.0), (10, 1.0), (12, 2.0)])
        .unwrap();
    let a = autocorrelation(&x);
    c.bench_function("signal_from_autocorrelation k5", |b| {
        b.iter(|| signal_from_autocorrelation(black_box(&a), 5).unwrap())
    });
}

criterion_group!(benches, lifted, fmm);
criterion_main!(benches);
