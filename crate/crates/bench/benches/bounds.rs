use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use specbound::harness::{gen_commuting_pair, gen_matrix, Family, InstanceSpec};
use specbound::matrix::{eval_matrix_series, operator_norm, spectral_radius};
use specbound::bounds::DEFAULT_P_GRID;
use specbound::{best_bound, Operands, PowerSeries, DEFAULT_TOL};

const DIMS: [usize; 3] = [4, 16, 64];

fn dense(dim: usize, target: f64) -> specbound::ComplexMatrix {
    gen_matrix(&InstanceSpec::new(1, dim, Family::DenseRandom, target)).unwrap()
}

fn matrix_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("matrix");
    for dim in DIMS {
        let t = dense(dim, 0.8);
        group.bench_with_input(BenchmarkId::new("spectral_radius", dim), &t, |b, t| {
            b.iter(|| spectral_radius(black_box(t)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("operator_norm", dim), &t, |b, t| {
            b.iter(|| operator_norm(black_box(t)).unwrap())
        });
        let f = PowerSeries::exp();
        group.bench_with_input(BenchmarkId::new("eval_exp", dim), &t, |b, t| {
            b.iter(|| eval_matrix_series(&f, black_box(t), DEFAULT_TOL).unwrap())
        });
    }
    group.finish();
}

fn bound_selection(c: &mut Criterion) {
    let mut group = c.benchmark_group("best_bound");
    let f = PowerSeries::geometric();
    for dim in DIMS {
        let t = dense(dim, 0.8);
        group.bench_with_input(BenchmarkId::new("single", dim), &t, |b, t| {
            b.iter(|| best_bound(&f, Operands::Single(black_box(t)), DEFAULT_TOL, &DEFAULT_P_GRID).unwrap())
        });
        let (a, bm) = gen_commuting_pair(&InstanceSpec::new(2, dim, Family::CommutingPolynomialPair, 0.7)).unwrap();
        group.bench_with_input(BenchmarkId::new("pair", dim), &(a, bm), |b, (a, bm)| {
            b.iter(|| best_bound(&f, Operands::Pair(black_box(a), black_box(bm)), DEFAULT_TOL, &DEFAULT_P_GRID).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, matrix_kernels, bound_selection);
criterion_main!(benches);
