use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rla_core::cartanfam::{build, build_k_family};
use rla_core::repmod::{composition_factors, density_module};
use rla_core::torirank::{rank_via_torus, registered_torus_checked, weight_decomposition};
use rla_core::{Family, FamilySpec, FpMatrix, PrimeField};

fn random_matrix(field: PrimeField, n: usize, seed: u64) -> FpMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(0..field.p() as i64)).collect())
        .collect();
    FpMatrix::from_i64(field, &rows)
}

fn linear_algebra(c: &mut Criterion) {
    let f = PrimeField::new(5).unwrap();
    let m = random_matrix(f, 200, 1);
    c.bench_function("rref 200x200 @p5", |b| b.iter(|| black_box(&m).rref()));
    let a = random_matrix(f, 125, 2);
    c.bench_function("matrix p-th power 125x125 @p5", |b| {
        b.iter(|| black_box(&a).mat_p_power().unwrap())
    });
}

fn construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("build");
    g.sample_size(10);
    g.bench_function("K''(3)/K(3) @p5", |b| {
        b.iter(|| build_k_family(3, 5).unwrap())
    });
    g.bench_function("H(2) @p5", |b| {
        b.iter(|| build(FamilySpec::new(Family::H, 2, 5).unwrap()).unwrap())
    });
    g.finish();
}

fn invariants(c: &mut Criterion) {
    let spec = FamilySpec::new(Family::K, 3, 5).unwrap();
    let k = build(spec).unwrap();
    let t = registered_torus_checked(spec, &k).unwrap();
    let mut g = c.benchmark_group("invariants K(3) @p5");
    g.sample_size(10);
    g.bench_function("rank", |b| {
        b.iter(|| rank_via_torus(black_box(&t)).unwrap())
    });
    g.bench_function("weights", |b| {
        b.iter(|| weight_decomposition(k.field(), k.dim(), &t.ad_matrices()).unwrap())
    });
    g.finish();

    let v = density_module(7, 3).unwrap();
    c.bench_function("composition factors density(7, 3)", |b| {
        b.iter(|| composition_factors(black_box(&v), 0).unwrap())
    });
}

criterion_group!(benches, linear_algebra, construction, invariants);
criterion_main!(benches);
