use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use wallgrad::experiment::{compute, ExperimentConfig};
use wallgrad::gradient::{cell_gradients_from_nodal, nodal_lsq_gradients};
use wallgrad::wallnormal::{evaluate, StepRule, WallInputs};
use wallgrad::{LsqOptions, Method, WALL_TAG};
use wallgrad_bench::{blasius, grid, sampled};

fn nodal_gradients(c: &mut Criterion) {
    let field = blasius();
    let mut group = c.benchmark_group("nodal_lsq");
    for nx in [32, 64, 128] {
        let mesh = grid(nx);
        let cells = sampled(&mesh, &field);
        group.bench_with_input(BenchmarkId::from_parameter(nx), &nx, |b, _| {
            b.iter(|| nodal_lsq_gradients(&mesh, black_box(&cells), &field, &LsqOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn wall_methods(c: &mut Criterion) {
    let field = blasius();
    let mesh = grid(64);
    let cells = sampled(&mesh, &field);
    let nodal = nodal_lsq_gradients(&mesh, &cells, &field, &LsqOptions::default()).unwrap();
    let cell_grads = cell_gradients_from_nodal(&mesh, &nodal).unwrap();
    let inputs = WallInputs {
        mesh: &mesh,
        field: &cells,
        bc: &field,
        nodal: &nodal,
        cell_grads: &cell_grads,
        tag: WALL_TAG,
        eta_rule: StepRule::eta_profile(0.5, 1e6),
        const_rule: StepRule::global_constant(0.5, 1.0, 1e6),
    };
    let mut group = c.benchmark_group("wall_derivative");
    for method in Method::ALL {
        group.bench_function(method.name(), |b| b.iter(|| evaluate(black_box(method), &inputs).unwrap()));
    }
    group.finish();
}

fn full_pipeline(c: &mut Criterion) {
    let cfg = ExperimentConfig::default();
    c.bench_function("default_experiment", |b| b.iter(|| compute(black_box(&cfg)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = nodal_gradients, wall_methods, full_pipeline
}
criterion_main!(benches);
