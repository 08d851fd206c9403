use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qanneal::analyzer::{sweep, Builder, SweepOptions};
use qanneal::bounds::compile_bounds;
use qanneal::parallel::Parallelism;
use qanneal::solver::{enumerate_ground_states, simulated_anneal, AnnealSchedule, EnumerateOptions};
use qanneal::sort::{build_sort, SortWeights};

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn exhaustive(c: &mut Criterion) {
    let p = compile_bounds(3, 3).unwrap().with_values(Some(&[1, 4, 6]), Some(5)).unwrap();
    let mut g = c.benchmark_group("exhaustive_bounds_3x3");
    g.sample_size(10);
    for (name, mode) in MODES {
        let opts = EnumerateOptions { parallelism: mode, ..Default::default() };
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| enumerate_ground_states(&p.qubo.base, &p.clamp, &opts).unwrap())
        });
    }
    g.finish();
}

fn anneal(c: &mut Criterion) {
    let p = build_sort(3, 2, &SortWeights::default()).unwrap().with_values(&[3, 0, 2]).unwrap();
    let schedule = AnnealSchedule { reads: 32, sweeps: 200, ..Default::default() };
    let mut g = c.benchmark_group("anneal_sort_3x2");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| simulated_anneal(&p.qubo.base, &p.clamp, &schedule, mode).unwrap())
        });
    }
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let ns: Vec<usize> = (8..=64).step_by(8).collect();
    let mut g = c.benchmark_group("sweep_search_or");
    g.sample_size(10);
    for (name, mode) in MODES {
        let opts = SweepOptions { parallelism: mode, timing: false };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| sweep(Builder::SearchOr, &ns, 8, &opts).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, exhaustive, anneal, sweeps);
criterion_main!(benches);
