use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mrsband_core::dataset::{select_binary, synthesize, Band, SynthSpec};
use mrsband_core::neuralnet::{train, NetworkConfig};
use mrsband_core::window::{build_dim, sweep_windows};
use mrsband_core::ClassCode;

fn pair(m: usize, n: usize) -> mrsband_core::BinaryDataset {
    let band = Band {
        start: m * 2 / 5,
        end: m / 2,
    };
    let spec = SynthSpec::banded(
        m,
        &[(ClassCode::Gl, n, 0.0), (ClassCode::Mm, n, 1.0)],
        band,
        1.0,
        0.2,
        1,
    )
    .unwrap();
    select_binary(&synthesize(&spec).unwrap(), ClassCode::Gl, ClassCode::Mm).unwrap()
}

fn bench_sweep(c: &mut Criterion) {
    let ds = pair(512, 30);
    c.bench_function("sweep_w1_m512", |b| {
        b.iter(|| sweep_windows(black_box(&ds), 1).unwrap())
    });
}

fn bench_dim(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_dim");
    group.sample_size(10);
    for m in [64usize, 128, 256] {
        let ds = pair(m, 30);
        group.bench_with_input(BenchmarkId::from_parameter(m), &ds, |b, ds| {
            b.iter(|| build_dim(ds).unwrap())
        });
    }
    group.finish();
}

fn bench_train(c: &mut Criterion) {
    let mut group = c.benchmark_group("train");
    group.sample_size(10);
    for n_inputs in [2usize, 10, 40] {
        let inputs: Vec<Vec<f64>> = (0..48)
            .map(|i| {
                (0..n_inputs)
                    .map(|j| ((i * 7 + j * 13) % 17) as f64 / 17.0 - 0.5)
                    .collect()
            })
            .collect();
        let targets: Vec<f64> = (0..48)
            .map(|i| if inputs[i][0] > 0.0 { 1.0 } else { -1.0 })
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(n_inputs), &n_inputs, |b, &n| {
            b.iter(|| train(&NetworkConfig::new(n, 3), &inputs, &targets).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_dim, bench_train);
criterion_main!(benches);
