use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use arir::framework::{run, RunConfig, Variant};
use arir::{generate, par, StaticGraph};

fn instances() -> Vec<Arc<StaticGraph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    (0..16)
        .map(|i| Arc::new(generate::gnp(150 + 10 * i, 0.05, &mut rng)))
        .collect()
}

fn solve_all(graphs: &[Arc<StaticGraph>], parallel: bool) -> usize {
    let solve = |g: &Arc<StaticGraph>| {
        let config = RunConfig {
            variant: Variant::Arir2,
            m: 500,
            n: 5_000,
            cutoff_seconds: 60.0,
            max_iterations: Some(5_000),
            ..RunConfig::default()
        };
        run(g, &config).expect("valid config").stats.best_size
    };
    let sizes = if parallel {
        par::map(graphs, 0, solve)
    } else {
        par::map_sequential(graphs, solve)
    };
    sizes.into_iter().sum()
}

fn batch(c: &mut Criterion) {
    let graphs = instances();
    let mut group = c.benchmark_group("batch_runs");
    group.sample_size(10);
    for (name, parallel) in [("sequential", false), ("parallel", true)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &parallel, |b, &p| {
            b.iter(|| solve_all(&graphs, p))
        });
    }
    group.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
