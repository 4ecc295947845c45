use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use tailpath::special_math::{StudentT, DEFAULT_GRID};
use tailpath::{maximize_slice, mtcm, trace_path, MtcmOptions, Schedule, SpectralModel, TailCopulaFn};
use tailpath_bench::fixtures;

fn student_t(c: &mut Criterion) {
    let t = StudentT::new(4.5).unwrap();
    c.bench_function("t_cdf", |b| b.iter(|| t.cdf(black_box(-3.7))));
    c.bench_function("t_quantile", |b| b.iter(|| t.quantile(black_box(1e-6))));
}

fn copula_cdf(c: &mut Criterion) {
    let mut g = c.benchmark_group("cdf");
    for (name, model) in fixtures() {
        g.bench_function(name, |b| b.iter(|| model.cdf(black_box(0.3), black_box(0.6)).unwrap()));
    }
    g.finish();
}

fn mtcm_search(c: &mut Criterion) {
    let mut g = c.benchmark_group("mtcm");
    for (name, model) in fixtures() {
        let tail = TailCopulaFn::for_model(&model);
        g.bench_function(name, |b| b.iter(|| mtcm(&tail, &MtcmOptions::default()).unwrap()));
    }
    g.finish();
}

fn slices(c: &mut Criterion) {
    let mut g = c.benchmark_group("maximize_slice");
    for (name, model) in fixtures() {
        g.bench_function(name, |b| b.iter(|| maximize_slice(&model, black_box(1e-3), DEFAULT_GRID, 1e-10).unwrap()));
    }
    g.finish();

    let mut g = c.benchmark_group("trace_path");
    g.sample_size(10);
    for (name, model) in fixtures() {
        g.bench_function(name, |b| b.iter(|| trace_path(&model, &Schedule::default(), DEFAULT_GRID, 1e-10).unwrap()));
    }
    g.finish();
}

fn spectral(c: &mut Criterion) {
    let sm = SpectralModel::new(4.0, 0.5).unwrap();
    c.bench_function("interior_mass", |b| b.iter(|| sm.interior_mass().unwrap()));
    c.bench_function("spectral_tail_copula", |b| b.iter(|| sm.spectral_tail_copula(black_box(0.7), 1.3).unwrap()));
}

criterion_group!(benches, student_t, copula_cdf, mtcm_search, slices, spectral);
criterion_main!(benches);
