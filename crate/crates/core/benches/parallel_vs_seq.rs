//! Parallel-versus-sequential comparison for the two hot paths: the order
//! search and the random-deletion trials. Run both feature configurations
//! to see the rayon speedup:
//!
//!   cargo bench
//!   cargo bench --no-default-features

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ramsey_forge::bounds::{deletion_trials, deletion_trials_seq};
use ramsey_forge::h3_spec;
use ramsey_forge::search::{run_tuples, run_tuples_seq, OrderFamily};

fn bench_order_search(c: &mut Criterion) {
    let family = OrderFamily::new(4).expect("r=4 family");
    let indices: Vec<u64> = (0..family.tuple_count()).collect();
    let mut g = c.benchmark_group("order_search_r4");
    g.sample_size(10);
    g.bench_with_input(BenchmarkId::new("parallel", indices.len()), &indices, |b, idx| {
        b.iter(|| run_tuples(&family, idx, 3).unwrap())
    });
    g.bench_with_input(BenchmarkId::new("sequential", indices.len()), &indices, |b, idx| {
        b.iter(|| run_tuples_seq(&family, idx, 3).unwrap())
    });
    g.finish();
}

fn bench_deletion_trials(c: &mut Criterion) {
    let spec = h3_spec();
    let trials = 512;
    let mut g = c.benchmark_group("deletion_trials_h3_n6");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("parallel", trials), |b| {
        b.iter(|| deletion_trials(&spec, 6, 0.3, trials, 42).unwrap())
    });
    g.bench_function(BenchmarkId::new("sequential", trials), |b| {
        b.iter(|| deletion_trials_seq(&spec, 6, 0.3, trials, 42).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_order_search, bench_deletion_trials);
criterion_main!(benches);
