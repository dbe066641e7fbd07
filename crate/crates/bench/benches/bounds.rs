use criterion::{criterion_group, criterion_main, Criterion};
use ramseylab::bounds::checks::{lemma51_check, optimal_r};
use ramseylab::bounds::{conlon_bound, log_binomial};

fn log_binomials(c: &mut Criterion) {
    let mut g = c.benchmark_group("log_binomial");
    g.bench_function("C(2000,1000) exact", |b| b.iter(|| log_binomial(2000, 1000, 256).unwrap()));
    g.bench_function("C(2e6,1e6) gamma", |b| b.iter(|| log_binomial(2_000_000, 1_000_000, 256).unwrap()));
    g.finish();
}

fn bounds(c: &mut Criterion) {
    c.bench_function("conlon_bound k=l=1e6 r=8", |b| {
        b.iter(|| conlon_bound(1_000_000, 1_000_000, 8, 1.0, 256).unwrap())
    });
    c.bench_function("optimal_r k=1e9", |b| b.iter(|| optimal_r(1_000_000_000, 1.0, 1.0, 5, 256).unwrap()));
}

fn profile_check(c: &mut Criterion) {
    let mut g = c.benchmark_group("lemma51_check");
    g.sample_size(10);
    g.bench_function("r=8 grid=1000", |b| b.iter(|| lemma51_check(8, 1000).unwrap()));
    g.finish();
}

criterion_group!(benches, log_binomials, bounds, profile_check);
criterion_main!(benches);
