use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use uqg::sampling::{random_bu_parameter, random_invertible, random_positive, rng_from_seed};
use uqg::{au_invariant, bu_descriptor, bu_isomorphic, polar_decompose, Tolerance};

fn bench_polar(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("polar_decompose");
    for n in [4usize, 16, 64] {
        let mut rng = rng_from_seed(1);
        let q = random_invertible(n, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &q, |b, q| {
            b.iter(|| polar_decompose(q, &tol).unwrap())
        });
    }
    group.finish();
}

fn bench_au_invariant(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("au_invariant");
    for n in [4usize, 16, 64] {
        let mut rng = rng_from_seed(2);
        let q = random_positive(n, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &q, |b, q| {
            b.iter(|| au_invariant(q, &tol).unwrap())
        });
    }
    group.finish();
}

fn bench_bu(c: &mut Criterion) {
    let tol = Tolerance::default();
    let mut group = c.benchmark_group("bu");
    for n in [4usize, 8, 16] {
        let mut rng = rng_from_seed(3);
        let q = random_bu_parameter(n, 1, &mut rng).unwrap();
        group.bench_with_input(BenchmarkId::new("descriptor", n), &q, |b, q| {
            b.iter(|| bu_descriptor(q, &tol).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("isomorphic_self", n), &q, |b, q| {
            b.iter(|| bu_isomorphic(q, q, &tol, 0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_polar, bench_au_invariant, bench_bu);
criterion_main!(benches);
