use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use matchrank_bench::synthetic_matrix;
use matchrank_core::{mbm, MatchState};

/// Matching size of every prefix of the index order: one Hopcroft-Karp
/// run per prefix against one incremental state grown candidate by candidate.
fn prefix_curve(c: &mut Criterion) {
    let mut group = c.benchmark_group("prefix_curve");
    group.sample_size(10);
    for candidates in [200, 400] {
        let m = synthetic_matrix(5, 20, candidates);
        let order: Vec<usize> = (0..candidates).collect();
        group.bench_with_input(BenchmarkId::new("hopcroft_karp", candidates), &m, |b, m| {
            b.iter(|| {
                (1..=order.len())
                    .map(|k| mbm(m, &order[..k]).unwrap())
                    .sum::<usize>()
            })
        });
        group.bench_with_input(BenchmarkId::new("incremental", candidates), &m, |b, m| {
            b.iter(|| {
                let mut state = MatchState::new(m);
                for &a in &order {
                    state.commit_add(a).unwrap();
                }
                state.size()
            })
        });
    }
    group.finish();
}

fn full_matching(c: &mut Criterion) {
    let m = synthetic_matrix(10, 50, 5000);
    let pool: Vec<usize> = (0..m.candidates()).collect();
    c.bench_function("hopcroft_karp_5000x500", |b| b.iter(|| mbm(black_box(&m), &pool).unwrap()));
}

criterion_group!(benches, prefix_curve, full_matching);
criterion_main!(benches);
