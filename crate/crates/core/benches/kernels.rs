//! Parallel vs sequential timing for the three heavy kernels.
//!
//! With the default `parallel` feature each group has a `par` entry (rayon
//! path) and a `seq` entry (plain iterators); build with
//! `--no-default-features` to time the pure sequential fallback under the
//! same benchmark ids.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use lambda_bv::{
    brute_force_grid, brute_force_grid_seq, integral_modulus, integral_modulus_seq,
    variation_exact, variation_exact_seq, ExtremalProblem, StepFunction, WatermanSequence,
};

fn zigzag(pieces: usize) -> StepFunction {
    let bpts: Vec<f64> = (0..=pieces).map(|i| i as f64 / pieces as f64).collect();
    let values: Vec<f64> = (0..pieces)
        .map(|i| {
            let x = i as f64;
            (x * 2.39996).sin() * (1.0 + 0.3 * x)
        })
        .collect();
    StepFunction::from_breakpoints(bpts, values, false).unwrap()
}

fn bench_variation(c: &mut Criterion) {
    let f = zigzag(15);
    let seq = WatermanSequence::power(0.5).unwrap();
    let mut group = c.benchmark_group("variation_exact");
    group.sample_size(20);
    group.bench_function("seq", |b| {
        b.iter(|| variation_exact_seq(black_box(&f), &seq, 1.5).unwrap().value)
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| {
        b.iter(|| variation_exact(black_box(&f), &seq, 1.5).unwrap().value)
    });
    group.finish();
}

fn bench_modulus(c: &mut Criterion) {
    let f = zigzag(160);
    let mut group = c.benchmark_group("integral_modulus");
    group.bench_function("seq", |b| {
        b.iter(|| integral_modulus_seq(black_box(&f), 0.05, 2.0).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| {
        b.iter(|| integral_modulus(black_box(&f), 0.05, 2.0).unwrap())
    });
    group.finish();
}

fn bench_grid_oracle(c: &mut Criterion) {
    let seq = WatermanSequence::explicit(vec![1.0, 2.0, 3.0]).unwrap();
    let prob = ExtremalProblem::unit(seq, 3, 1.7).unwrap();
    let mut group = c.benchmark_group("brute_force_grid");
    group.bench_function("seq", |b| {
        b.iter(|| brute_force_grid_seq(black_box(&prob), 150).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| {
        b.iter(|| brute_force_grid(black_box(&prob), 150).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_variation, bench_modulus, bench_grid_oracle);
criterion_main!(benches);
