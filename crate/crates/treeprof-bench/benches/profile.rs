//! Benchmarks for the hot paths: split sampling, tree simulation, the
//! moment DP, root finding, circle-transform inversion, and fixed-point
//! draws. Sizes are kept moderate so the smoke run under `cargo test`
//! stays cheap; criterion scales iteration counts for real measurement.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num::complex::Complex64;
use std::hint::black_box;
use treeprof_core::model::TreeSampler;
use treeprof_core::{
    asymptotics, moments, spectral, ModelParams, RngStream, YSampler, DEFAULT_SEED,
};

fn bench_split_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_split");
    for (m, t) in [(2u64, 0u64), (3, 1)] {
        let params = ModelParams::new(m, t).unwrap();
        let mut rng = RngStream::new(DEFAULT_SEED, 90);
        group.bench_with_input(BenchmarkId::from_parameter(format!("m{m}t{t}")), &params, |b, p| {
            b.iter(|| treeprof_core::sample_split(p, black_box(100_000), &mut rng).unwrap())
        });
    }
    group.finish();
}

fn bench_tree_simulation(c: &mut Criterion) {
    let params = ModelParams::bst();
    let mut sampler = TreeSampler::new(params);
    let mut rng = RngStream::new(DEFAULT_SEED, 91);
    c.bench_function("sample_profile/n2000", |b| {
        b.iter(|| sampler.sample_profile(black_box(2000), &mut rng))
    });
    c.bench_function("keys_at_level/n2000_k15", |b| {
        b.iter(|| sampler.keys_at_level(black_box(2000), 15, &mut rng))
    });
}

fn bench_moment_dp(c: &mut Criterion) {
    let params = ModelParams::bst();
    c.bench_function("expected_profile_table/n300", |b| {
        b.iter(|| moments::expected_profile_table(&params, black_box(300), 40))
    });
    let z = Complex64::new(1.2, 0.4);
    c.bench_function("expected_w/n300", |b| {
        b.iter(|| moments::expected_w(&params, black_box(z), 300))
    });
    c.bench_function("second_moment_w/n200", |b| {
        b.iter(|| moments::second_moment_w(&params, black_box(Complex64::new(1.1, 0.0)), 200).unwrap())
    });
}

fn bench_spectral(c: &mut Criterion) {
    let params = ModelParams::new(3, 1).unwrap();
    let z = Complex64::new(1.2, 0.4);
    c.bench_function("all_roots/m3t1", |b| {
        b.iter(|| spectral::all_roots(&params, black_box(z), 1e-12).unwrap())
    });
    c.bench_function("beta_of_alpha/m3t1", |b| {
        b.iter(|| spectral::beta_of_alpha(&params, black_box(1.4), 1e-12).unwrap())
    });
}

fn bench_inversion(c: &mut Criterion) {
    let params = ModelParams::bst();
    c.bench_function("cauchy_inversion/n150", |b| {
        b.iter(|| asymptotics::cauchy_inversion(&params, 1.0, black_box(150), 20, 151).unwrap())
    });
}

fn bench_limit_draws(c: &mut Criterion) {
    let params = ModelParams::bst();
    let sampler = YSampler::new(&params, Complex64::new(1.2, 0.0)).unwrap();
    let mut rng = RngStream::new(DEFAULT_SEED, 92);
    c.bench_function("sample_y/beta1.2_depth12", |b| {
        b.iter(|| sampler.sample(black_box(12), &mut rng))
    });
}

criterion_group!(
    benches,
    bench_split_sampling,
    bench_tree_simulation,
    bench_moment_dp,
    bench_spectral,
    bench_inversion,
    bench_limit_draws
);
criterion_main!(benches);
