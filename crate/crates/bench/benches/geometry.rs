use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use waldspace::projection::{project_global, symmetrized_geodesic, Chart, ProjectOptions};
use waldspace::riemann::{shoot_geodesic, ShootOptions};
use waldspace::spd::{covariance_of, extrinsic_cov_distance, GaussianMetric};
use waldspace::twostate::{char_prob, extrinsic_distance, fisher_info, ProbMetric, TwoStateMetric};
use waldspace::{random_wald, Param, RandomWald, Wald};

fn tree(n: usize, seed: u64) -> Wald {
    random_wald(n, seed, &RandomWald::default()).unwrap()
}

fn pruning(c: &mut Criterion) {
    let mut g = c.benchmark_group("pruning");
    for n in [8, 16, 32, 64] {
        let w = tree(n, 1);
        let s = 0x5555_5555_5555_5555u64 & (u64::MAX >> (64 - n));
        g.bench_with_input(BenchmarkId::from_parameter(n), &w, |b, w| {
            b.iter(|| char_prob(black_box(w), s))
        });
    }
    g.finish();
}

fn distances(c: &mut Criterion) {
    let mut g = c.benchmark_group("distance");
    for n in [6, 10] {
        let (a, b) = (tree(n, 2), tree(n, 3));
        g.bench_with_input(BenchmarkId::new("cov", n), &(&a, &b), |bch, (a, b)| {
            bch.iter(|| extrinsic_cov_distance(a, b))
        });
        g.bench_with_input(BenchmarkId::new("js", n), &(&a, &b), |bch, (a, b)| {
            bch.iter(|| extrinsic_distance(a, b, ProbMetric::JensenShannon, 16))
        });
    }
    g.finish();
}

fn metrics(c: &mut Criterion) {
    let w = tree(6, 4);
    c.bench_function("fisher_info/6", |b| {
        b.iter(|| fisher_info(black_box(&w), Param::Length))
    });
}

fn projection(c: &mut Criterion) {
    let mut g = c.benchmark_group("projection");
    g.sample_size(10);
    let opts = ProjectOptions::default();
    for n in [5, 8] {
        let target = covariance_of(&tree(n, 5)).unwrap();
        let seed = Chart::from_wald(&tree(n, 6)).unwrap();
        g.bench_with_input(BenchmarkId::new("global", n), &n, |b, _| {
            b.iter(|| project_global(&target, &seed, &opts))
        });
    }
    let (a, b) = (tree(5, 7), tree(5, 8));
    g.bench_function("symmetrized_geodesic/5/k16", |bch| {
        bch.iter(|| symmetrized_geodesic(&a, &b, 16, &opts))
    });
    g.finish();
}

fn shooting(c: &mut Criterion) {
    let mut g = c.benchmark_group("shoot");
    g.sample_size(10);
    let w = tree(5, 9);
    let x0 = w.lengths();
    let mut v = vec![0.0; x0.len()];
    v[w.topology().internal_indices()[0]] = 1.0;
    let opts = ShootOptions {
        max_time: 0.2,
        ..ShootOptions::default()
    };
    let gauss = GaussianMetric::new(w.topology()).unwrap();
    let two = TwoStateMetric::new(w.topology()).unwrap();
    g.bench_function("gaussian/5", |b| b.iter(|| shoot_geodesic(&gauss, &x0, &v, &opts)));
    g.bench_function("twostate/5", |b| b.iter(|| shoot_geodesic(&two, &x0, &v, &opts)));
    g.finish();
}

criterion_group!(benches, pruning, distances, metrics, projection, shooting);
criterion_main!(benches);
