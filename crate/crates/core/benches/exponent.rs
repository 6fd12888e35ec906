use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use newtloj::boundary::build_boundary_with;
use newtloj::engine::lojasiewicz_batch;
use newtloj::oracle::{brute_force_boundary_with, sweep_lower_bound_with};
use newtloj::par::Execution;
use newtloj::sample::{random_isolated_support, SampleBounds};
use newtloj::Support;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn supports(n: usize, points: usize) -> Vec<Support> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    (0..n)
        .map(|_| random_isolated_support(&mut rng, 3, SampleBounds { points, max_exponent: 12 }).unwrap())
        .collect()
}

fn batch(c: &mut Criterion) {
    let mut g = c.benchmark_group("lojasiewicz_batch");
    let inputs = supports(256, 10);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| lojasiewicz_batch(&inputs, exec)));
    }
    g.finish();
}

fn boundary(c: &mut Criterion) {
    let mut g = c.benchmark_group("boundary");
    let s = supports(1, 40).remove(0);
    let small = supports(1, 16).remove(0);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("incremental", name), &s, |b, s| b.iter(|| build_boundary_with(s, exec)));
        g.bench_with_input(BenchmarkId::new("brute_force", name), &small, |b, s| {
            b.iter(|| brute_force_boundary_with(s, 16, exec).unwrap())
        });
    }
    g.finish();
}

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep_lower_bound");
    let s = supports(1, 12).remove(0);
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| sweep_lower_bound_with(&s, 0, exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, batch, boundary, sweep);
criterion_main!(benches);
