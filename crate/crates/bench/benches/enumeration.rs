use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tdrl_core::codes::greedy_code;
use tdrl_core::neighborhood::{ball_in, ball_out, max_intersection, Limits};
use tdrl_core::perm::{OpKind, Permutation};

fn balls(c: &mut Criterion) {
    let mut group = c.benchmark_group("ball");
    for n in [10, 14, 18] {
        let p = Permutation::identity(n);
        for (name, limits) in [("parallel", Limits::default()), ("sequential", Limits::default().sequential())] {
            group.bench_with_input(BenchmarkId::new(format!("out/{name}"), n), &p, |b, p| {
                b.iter(|| ball_out(black_box(p), OpKind::Tdrl, None, &limits).unwrap())
            });
            group.bench_with_input(BenchmarkId::new(format!("in/{name}"), n), &p, |b, p| {
                b.iter(|| ball_in(black_box(p), OpKind::Tdrl, None, &limits).unwrap())
            });
        }
    }
    group.finish();
}

fn pair_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_intersection");
    group.sample_size(10);
    for n in [5, 6, 7] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| max_intersection(n, OpKind::Tdrl, &Limits::default()).unwrap())
        });
    }
    group.finish();
}

fn codes(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_code");
    group.sample_size(10);
    for (n, k) in [(6, 3), (7, 4), (8, 3)] {
        group.bench_function(format!("n{n}k{k}"), |b| {
            b.iter(|| greedy_code(n, k, OpKind::Mtdrl, &Limits::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, balls, pair_search, codes);
criterion_main!(benches);
