use std::hint::black_box;
use std::path::Path;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use mapf::experiment::{run_experiment, ExperimentConfig};
use mapf::io::generate_random_instance;
use mapf::{solve_rnd, Execution, Limits};

const SWEEP: &str = "\
algorithms = pbs, fix, lh, sh
width = 12
height = 12
obstacle_pct = 10
agents = 6, 10
seeds = 0..4
timeout = 10
high_level_limit = 5000
";

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn sweep(c: &mut Criterion) {
    let config = ExperimentConfig::parse(SWEEP, Path::new(".")).expect("valid config");
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, execution) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(run_experiment(&config, execution).expect("sweep runs")))
        });
    }
    group.finish();
}

fn rnd(c: &mut Criterion) {
    let g = generate_random_instance(16, 16, 10.0, 20, 7).expect("feasible");
    let limits = Limits::default();
    let mut group = c.benchmark_group("rnd_runs");
    group.sample_size(10);
    for (name, execution) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(solve_rnd(&g.instance, 16, &limits, 1, execution)))
        });
    }
    group.finish();
}

criterion_group!(benches, sweep, rnd);
criterion_main!(benches);
