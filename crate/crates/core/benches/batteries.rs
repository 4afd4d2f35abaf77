use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use inobody::par::ExecMode;
use inobody::verify::{run_suite, Suite, VerifyConfig};

fn config(mode: ExecMode) -> VerifyConfig {
    VerifyConfig {
        closures: 200,
        borel_bodies: 20,
        subspaces: 20,
        forms: 20,
        models: 100,
        ..VerifyConfig::new(7)
    }
    .with_mode(mode)
}

fn batteries(c: &mut Criterion) {
    let mut group = c.benchmark_group("batteries");
    group.sample_size(10);
    for suite in Suite::ALL {
        for (label, mode) in [
            ("sequential", ExecMode::Sequential),
            ("parallel", ExecMode::Parallel),
        ] {
            let cfg = config(mode);
            group.bench_with_input(BenchmarkId::new(suite.name(), label), &cfg, |b, cfg| {
                b.iter(|| black_box(run_suite(suite, cfg)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, batteries);
criterion_main!(benches);
