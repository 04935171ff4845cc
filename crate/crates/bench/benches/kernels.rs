use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use jkron_bench::{symmetric_pair, SIZES};
use jkron_core::dense::kron;
use jkron_core::eigen::sym_eigen;
use jkron_core::exact::rat;
use jkron_core::{certify_skew_extremal, check_strong, fixture, jordan_kron, spectrum_split, RationalMatrix};

fn bench_kron(c: &mut Criterion) {
    let mut group = c.benchmark_group("kron");
    for n in SIZES {
        let (a, b) = symmetric_pair(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| kron(black_box(&a), black_box(&b)))
        });
    }
    group.finish();
}

fn bench_eigen(c: &mut Criterion) {
    let mut group = c.benchmark_group("sym_eigen");
    for n in SIZES {
        let (a, b) = symmetric_pair(n, 11);
        let m = jordan_kron(&a, &b).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n * n), &n, |bench, _| {
            bench.iter(|| sym_eigen(black_box(&m), 1e-12).unwrap())
        });
    }
    group.finish();
}

fn bench_split(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum_split");
    for n in SIZES {
        let (a, b) = symmetric_pair(n, 13);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| spectrum_split(black_box(&a), black_box(&b), 1e-8).unwrap())
        });
    }
    group.finish();
}

fn bench_strong(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_strong");
    for n in SIZES {
        let (a, b) = symmetric_pair(n, 17);
        let split = spectrum_split(&a, &b, 1e-8).unwrap();
        let tol = 1e-8 * split.c_norm();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| check_strong(black_box(&split), tol))
        });
    }
    group.finish();
}

fn bench_certify(c: &mut Criterion) {
    let fx = fixture("A0B0").unwrap();
    let a = RationalMatrix::from_dense(&fx.a).unwrap();
    let b = RationalMatrix::from_dense(&fx.b).unwrap();
    let w = RationalMatrix::from_dense(fx.witness.as_ref().unwrap()).unwrap();
    let shift = rat(19, 2);
    c.bench_function("certify_A0B0", |bench| {
        bench.iter(|| certify_skew_extremal("A0B0", &a, &b, &w, black_box(&shift)).unwrap())
    });
}

criterion_group!(benches, bench_kron, bench_eigen, bench_split, bench_strong, bench_certify);
criterion_main!(benches);
