use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use descent_core::brauer::invariant_vector;
use descent_core::field::{Field, RatField};
use descent_core::par;
use descent_core::places::is_in_wp_global;
use descent_core::ratfun::RatFun;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn symbols(n: usize) -> Vec<(RatFun, RatFun)> {
    let f = RatField::new(1, "t");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    (0..n).map(|_| (f.random_nonzero(3, &mut rng), f.random_nonzero(3, &mut rng))).collect()
}

fn bench_invariants(c: &mut Criterion) {
    let f = RatField::new(1, "t");
    let mut group = c.benchmark_group("invariant_vectors");
    group.sample_size(10);
    for n in [16, 64] {
        let batch = symbols(n);
        group.bench_with_input(BenchmarkId::new("parallel", n), &batch, |b, batch| {
            b.iter(|| par::map(batch, |(x, y)| invariant_vector(&f, x, y)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &batch, |b, batch| {
            b.iter(|| par::seq::map(batch, |(x, y)| invariant_vector(&f, x, y)))
        });
    }
    group.finish();
}

fn bench_wp(c: &mut Criterion) {
    let batch: Vec<RatFun> = symbols(256).into_iter().map(|(a, _)| a).collect();
    let mut group = c.benchmark_group("wp_membership");
    group.bench_function("parallel", |b| b.iter(|| par::map(black_box(&batch), |a| is_in_wp_global(a).holds())));
    group.bench_function("sequential", |b| {
        b.iter(|| par::seq::map(black_box(&batch), |a| is_in_wp_global(a).holds()))
    });
    group.finish();
}

criterion_group!(benches, bench_invariants, bench_wp);
criterion_main!(benches);
