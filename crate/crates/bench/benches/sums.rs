use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use zetasum_core::asymptotics::chi_exact;
use zetasum_core::doublesums::{grid_double_sum, mt_b_sum, Strategy};
use zetasum_core::kernel::oracle::oracle_recompute;
use zetasum_core::phases::{build_prefix, single_sum};
use zetasum_core::{PhaseKind, SumSpec, C64};

fn single(c: &mut Criterion) {
    let mut g = c.benchmark_group("single_sum");
    for t in [1e4, 1e5, 1e6] {
        let spec = SumSpec::new(PhaseKind::F3, 0.5, t, 1, t as u64);
        g.bench_with_input(BenchmarkId::new("F3", t), &spec, |b, s| b.iter(|| single_sum(black_box(s)).unwrap()));
    }
    let spec = SumSpec::new(PhaseKind::F1, 0.5, 1e4, 1, 10_000);
    g.bench_function("F1/1e4", |b| b.iter(|| single_sum(black_box(&spec)).unwrap()));
    g.bench_function("oracle/F1/1e4", |b| b.iter(|| oracle_recompute(black_box(&spec)).unwrap()));
    g.finish();
}

fn prefix(c: &mut Criterion) {
    let mut g = c.benchmark_group("prefix");
    for n in [10_000u64, 100_000] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| build_prefix(0.5, 1e5, false, n).unwrap())
        });
    }
    g.finish();
}

fn double(c: &mut Criterion) {
    let mut g = c.benchmark_group("double");
    g.sample_size(10);
    for t in [1e3, 1e4] {
        g.bench_with_input(BenchmarkId::new("grid/prefix", t), &t, |b, &t| {
            b.iter(|| grid_double_sum(0.5, t, Strategy::PrefixFactorized).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("s_b/convolution", t), &t, |b, &t| {
            b.iter(|| mt_b_sum(-0.7, 0.3, 1.0, t, Strategy::Convolution).unwrap())
        });
    }
    g.bench_function("s_b/brute/1e3", |b| b.iter(|| mt_b_sum(-0.7, 0.3, 1.0, 1e3, Strategy::BruteForce).unwrap()));
    g.finish();
}

fn chi(c: &mut Criterion) {
    c.bench_function("chi_exact", |b| b.iter(|| chi_exact(black_box(C64::new(0.3, 12345.6))).unwrap()));
}

criterion_group!(benches, single, prefix, double, chi);
criterion_main!(benches);
