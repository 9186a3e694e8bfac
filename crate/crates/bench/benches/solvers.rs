use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dmpa_core::experiments::apply_snr;
use dmpa_core::verification::nsp_ratio_coefficients;
use dmpa_core::{grid_oracle, nsp_design, solve_general, solve_nsp, Scenario};

fn scenario(n: usize) -> Scenario {
    apply_snr(&Scenario::default().with_antennas(n), 15.0).unwrap()
}

fn design(c: &mut Criterion) {
    let mut group = c.benchmark_group("nsp_design");
    for n in [4usize, 16, 64, 256] {
        let h = scenario(n).channel_bob().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| nsp_design(black_box(h)).unwrap())
        });
    }
    group.finish();
}

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    for n in [4usize, 16, 64] {
        let s = scenario(n);
        let coeffs = nsp_ratio_coefficients(&s).unwrap();
        group.bench_with_input(BenchmarkId::new("general", n), &coeffs, |b, c| {
            b.iter(|| solve_general(black_box(c)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("nsp_end_to_end", n), &s, |b, s| {
            b.iter(|| solve_nsp(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let coeffs = nsp_ratio_coefficients(&scenario(16)).unwrap();
    let mut group = c.benchmark_group("grid_oracle");
    group.sample_size(20);
    for points in [1_001usize, 100_001] {
        group.bench_with_input(BenchmarkId::from_parameter(points), &points, |b, &p| {
            b.iter(|| grid_oracle(black_box(&coeffs), p).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, design, solvers, oracle);
criterion_main!(benches);
