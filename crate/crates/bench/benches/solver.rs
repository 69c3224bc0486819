use std::hint::black_box;

use cfp_bench::random_start;
use cfp_core::instances::sample_5x7;
use cfp_core::{improve_solution, sample_partition_uniform, solve, PartitionSpec, RandomSource, SolveParams, Weight};
use criterion::{criterion_group, criterion_main, Criterion};

fn improvement(c: &mut Criterion) {
    let (matrix, start) = random_start(50, 150, 0.2, 24, 1);
    c.bench_function("improve 50x150, 24 cells", |b| {
        b.iter(|| improve_solution(&matrix, black_box(&start), Weight::HALF, true))
    });
}

fn multistart(c: &mut Criterion) {
    let matrix = sample_5x7();
    let params = SolveParams::default();
    c.bench_function("solve 5x7 defaults", |b| {
        b.iter(|| solve(&matrix, black_box(&params)).unwrap())
    });
}

fn sampling(c: &mut Criterion) {
    let spec = PartitionSpec::new(150, 24, 1);
    let mut rng = RandomSource::new(2, 0).rng();
    c.bench_function("sample partition 150/24", |b| {
        b.iter(|| sample_partition_uniform(black_box(spec), &mut rng).unwrap())
    });
}

criterion_group!(benches, improvement, multistart, sampling);
criterion_main!(benches);
