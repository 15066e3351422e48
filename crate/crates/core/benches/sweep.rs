use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use macro_sird::{policy_sweep_with, run_scenario, Execution, LossParams, PolicyRegime, ScenarioConfig};

fn single_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_scenario");
    for (name, policy) in [
        ("none", PolicyRegime::none()),
        ("hard", PolicyRegime::hard(0.5)),
        ("soft", PolicyRegime::soft(0.5, 1.0)),
    ] {
        let cfg = ScenarioConfig {
            policy,
            ..ScenarioConfig::default()
        };
        group.bench_function(name, |b| b.iter(|| run_scenario(black_box(&cfg)).unwrap()));
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let cfg = ScenarioConfig::default();
    let lp = LossParams::default();
    let thetas = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
    let mus = [0.01, 0.5, 1.0, 2.0];

    let mut group = c.benchmark_group("policy_sweep");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_with_input(BenchmarkId::new(name, thetas.len() * mus.len()), &exec, |b, &exec| {
            b.iter(|| policy_sweep_with(&cfg, &thetas, &mus, &lp, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, single_run, sweep);
criterion_main!(benches);
