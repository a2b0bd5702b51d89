use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use matchrank_bench::synthetic_samples;
use matchrank_core::ranker::{lazy_greedy, naive_greedy};

fn greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy");
    group.sample_size(10);
    for candidates in [200, 500] {
        let samples = synthetic_samples(5, 10, candidates, 50);
        group.bench_with_input(BenchmarkId::new("naive", candidates), &samples, |b, s| {
            b.iter(|| naive_greedy(s, None).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("lazy", candidates), &samples, |b, s| {
            b.iter(|| lazy_greedy(s, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, greedy);
criterion_main!(benches);
