use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use duality::par::Execution;
use duality::verify::run_suite_with;

fn sweeps(c: &mut Criterion) {
    let cases: [(&str, &str, u64); 4] = [
        ("successor-windows", "max_n", 8),
        ("immerman-complement", "max_len", 9),
        ("npda-A", "max_len", 8),
        ("semilinear-folin", "sets", 10),
    ];
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    for (suite, param, value) in cases {
        let params: BTreeMap<String, u64> = [(param.to_string(), value)].into();
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::default())] {
            group.bench_with_input(BenchmarkId::new(suite, label), &params, |b, p| {
                b.iter(|| black_box(run_suite_with(suite, p, exec).unwrap().cases))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
