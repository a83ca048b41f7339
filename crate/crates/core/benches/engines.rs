use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use coalgebra::barr::{barr_vs_bisim_exhaustive, barr_vs_bisim_harness};
use coalgebra::exec::Execution;
use coalgebra::selftest::{run_criterion, SelftestConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn harness(c: &mut Criterion) {
    let mut group = c.benchmark_group("barr_vs_bisim");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("random_200x6", name), &exec, |b, &exec| {
            b.iter(|| barr_vs_bisim_harness(1, 200, 6, exec).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("exhaustive_3", name), &exec, |b, &exec| {
            b.iter(|| barr_vs_bisim_exhaustive(3, exec).unwrap())
        });
    }
    group.finish();
}

fn monad_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("monad_laws");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SelftestConfig { exec, ..SelftestConfig::default() };
        group.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| run_criterion(8, cfg)));
    }
    group.finish();
}

criterion_group!(benches, harness, monad_suite);
criterion_main!(benches);
