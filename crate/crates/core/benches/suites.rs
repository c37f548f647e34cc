use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pfafflab::moments::Mode;
use pfafflab::suites::{run_suites_with, Execution, Suite, SuiteConfig};

fn config(suite: Suite, max_index: u32) -> SuiteConfig {
    SuiteConfig { suites: vec![suite], mode: Mode::Generic, max_total_index: max_index, max_order: 3, ..SuiteConfig::default() }
}

fn suites(c: &mut Criterion) {
    pfafflab::par::init_threads();
    let mut group = c.benchmark_group("suites");
    group.sample_size(10);
    for (suite, n) in [(Suite::Hierarchy, 5), (Suite::Recurrences, 7), (Suite::Orthogonality, 7)] {
        let cfg = config(suite, n);
        for (label, exec) in [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)] {
            group.bench_with_input(BenchmarkId::new(label, format!("{suite}-{n}")), &cfg, |b, cfg| {
                b.iter(|| run_suites_with(cfg, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
