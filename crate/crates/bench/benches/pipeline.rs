use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use tsbench_bench::test_samples;
use tsbench_core::eval::{parse_retrieval, score};
use tsbench_core::formats::{parse, render};
use tsbench_core::run::{run_tasks, RunOptions};
use tsbench_core::seed::rng_from;
use tsbench_core::solvers::{format_retrieval, OracleSolver};
use tsbench_core::synth::volatility::{simulate_garch, GarchParams};
use tsbench_core::synth::{gen_split, GenConfig};
use tsbench_core::tasks::{build_tasks, TaskPlan};
use tsbench_core::{DatasetKind, Split, TaskKind, WireFormat};

fn generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("generate");
    g.throughput(Throughput::Elements(100));
    for kind in [DatasetKind::Trend, DatasetKind::Volatility, DatasetKind::Correlation, DatasetKind::Outlier] {
        g.bench_with_input(BenchmarkId::from_parameter(kind), &kind, |b, &kind| {
            b.iter(|| gen_split(kind, Split::Train, 100, &GenConfig::default()).unwrap())
        });
    }
    g.finish();
    c.bench_function("garch_100k", |b| {
        b.iter(|| simulate_garch(GarchParams::default(), 100_000, &mut rng_from(1)))
    });
}

fn formats(c: &mut Criterion) {
    let series = test_samples(DatasetKind::Seasonality, 1).remove(0).series;
    let mut g = c.benchmark_group("format");
    for fmt in WireFormat::ALL {
        let text = render(&series, fmt);
        g.bench_with_input(BenchmarkId::new("render", fmt), &fmt, |b, &fmt| b.iter(|| render(black_box(&series), fmt)));
        g.bench_with_input(BenchmarkId::new("parse", fmt), &fmt, |b, &fmt| b.iter(|| parse(black_box(&text), fmt).unwrap()));
    }
    g.finish();
}

fn evaluation(c: &mut Criterion) {
    let samples = test_samples(DatasetKind::Trend, 200);
    let plan = TaskPlan {
        kinds: vec![TaskKind::Detection, TaskKind::Classification, TaskKind::RetrievalBundle],
        ..Default::default()
    };
    c.bench_function("build_tasks_200", |b| b.iter(|| build_tasks(&samples, &[], &plan).unwrap()));
    let tasks = build_tasks(&samples, &[], &plan).unwrap();
    let results = run_tasks(&tasks, &OracleSolver, RunOptions::default()).unwrap();
    c.bench_function("oracle_run", |b| b.iter(|| run_tasks(&tasks, &OracleSolver, RunOptions::default()).unwrap()));
    c.bench_function("score", |b| b.iter(|| score(black_box(&results)).unwrap()));
    let reply = format_retrieval(tasks.iter().find_map(|t| t.key.retrieval.as_ref()).unwrap());
    c.bench_function("parse_retrieval", |b| b.iter(|| parse_retrieval(black_box(&reply))));
}

criterion_group!(benches, generation, formats, evaluation);
criterion_main!(benches);
