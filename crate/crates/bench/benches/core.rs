use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use periodfix::grassmannian_oracle::enumerate_splittings;
use periodfix::{assemble_period, cancel, enumerate_fix, enumerate_min_reps};
use periodfix_bench::{character_sum, composition, distinct_datum};

fn min_reps(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_min_reps");
    for (p, q) in [(vec![2, 3, 2], vec![3, 4]), (vec![1; 8], vec![4, 4]), (vec![2, 1, 3, 1, 3], vec![3, 3, 4])] {
        let (p, q) = (composition(&p), composition(&q));
        group.bench_with_input(BenchmarkId::from_parameter(format!("{:?}/{:?}", p.parts(), q.parts())), &(p, q), |b, (p, q)| {
            b.iter(|| enumerate_min_reps(black_box(p), black_box(q)).unwrap())
        });
    }
    group.finish();
}

fn fixed_points(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_fix");
    for k in [6, 12, 16] {
        let d = distinct_datum(k, 1);
        group.bench_with_input(BenchmarkId::from_parameter(k), &d, |b, d| b.iter(|| enumerate_fix(black_box(d))));
    }
    group.finish();
}

fn period(c: &mut Criterion) {
    let mut group = c.benchmark_group("assemble_period");
    for k in [4, 6, 8] {
        let d = distinct_datum(k, 1);
        group.bench_with_input(BenchmarkId::new("assemble", k), &d, |b, d| b.iter(|| assemble_period(black_box(d), "S")));
        let expr = assemble_period(&d, "S").expr;
        group.bench_with_input(BenchmarkId::new("cancel", k), &expr, |b, e| b.iter(|| cancel(black_box(e))));
    }
    group.finish();
}

fn splittings(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_splittings");
    group.sample_size(10);
    for (r, dim, q, n) in [(3, 3, 7, 1), (4, 4, 5, 2), (6, 5, 7, 2)] {
        let rep = character_sum(r, dim, q, n);
        group.bench_with_input(BenchmarkId::from_parameter(format!("Z{r}_F{q}_N{dim}_n{n}")), &rep, |b, rep| {
            b.iter(|| enumerate_splittings(black_box(rep), n).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, min_reps, fixed_points, period, splittings);
criterion_main!(benches);
