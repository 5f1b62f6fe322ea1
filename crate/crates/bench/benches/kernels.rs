use std::hint::black_box;

use chaoslab_bench::{full_kernel, kernel_pair};
use chaoslab_core::rng::substream;
use chaoslab_core::sampler::{draw_isonormal, CompiledChaos};
use chaoslab_core::timeseries::{CovarianceModel, GaussianPathSampler};
use chaoslab_core::{contract, symmetrize};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn contraction(c: &mut Criterion) {
    let mut g = c.benchmark_group("contract");
    for dim in [4, 8, 12] {
        let f = full_kernel(3, dim);
        g.bench_with_input(BenchmarkId::new("order3_r1", dim), &f, |b, f| b.iter(|| contract(black_box(f), black_box(f), 1)));
    }
    g.finish();
}

fn symmetrization(c: &mut Criterion) {
    let mut g = c.benchmark_group("symmetrize");
    for (p, q) in [(2, 2), (3, 3), (4, 3)] {
        let (f, h) = kernel_pair(p, q, 6);
        let t = contract(&f, &h, 0).unwrap();
        g.bench_with_input(BenchmarkId::new("product", format!("{p}x{q}")), &t, |b, t| b.iter(|| symmetrize(black_box(t))));
    }
    g.finish();
}

fn chaos_evaluation(c: &mut Criterion) {
    let mut g = c.benchmark_group("chaos_eval");
    for dim in [8, 16] {
        let compiled = CompiledChaos::new(&full_kernel(3, dim));
        let xi = draw_isonormal(&mut substream(0, "bench-eval", 0), dim);
        g.bench_with_input(BenchmarkId::new("order3", dim), &xi, |b, xi| b.iter(|| compiled.eval(black_box(xi))));
    }
    g.finish();
}

fn path_sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("gaussian_path");
    g.sample_size(20);
    let model = CovarianceModel::fgn(0.3).unwrap();
    for n in [1 << 10, 1 << 14] {
        let sampler = GaussianPathSampler::new(&model, n).unwrap();
        let mut rng = substream(0, "bench-path", 0);
        g.bench_function(BenchmarkId::new("fgn", n), |b| b.iter(|| sampler.sample(&mut rng)));
    }
    g.finish();
}

criterion_group!(benches, contraction, symmetrization, chaos_evaluation, path_sampling);
criterion_main!(benches);
