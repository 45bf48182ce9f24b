use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use pseudoharmonic::algebra::TruncationSpec;
use pseudoharmonic::specfun::{meijer_g, MeijerGSpec};
use pseudoharmonic::states::{self, Family, StateConfig};
use pseudoharmonic::{identity, nonclassical, ModelParams};

fn bench_meijer(c: &mut Criterion) {
    let spec = MeijerGSpec::bg_weight(1.0);
    let mut group = c.benchmark_group("meijer_g");
    for x in [0.01, 1.0, 100.0] {
        group.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| meijer_g(&spec, black_box(x)).unwrap())
        });
    }
    group.finish();
}

fn bench_states(c: &mut Criterion) {
    let p = ModelParams::default();
    let mut group = c.benchmark_group("states");
    group.sample_size(10);
    for dim in [64, 128] {
        let t = TruncationSpec::with_dim(dim).unwrap();
        group.bench_with_input(BenchmarkId::new("gp_displacement_oracle", dim), &t, |b, t| {
            b.iter(|| states::gp_displacement_oracle(&p, black_box(Complex64::new(0.8, 0.3)), t).unwrap())
        });
    }
    let cfg = StateConfig::for_metrics();
    let z = Complex64::new(0.9, 0.0);
    let t = states::auto_truncation(Family::GilmorePerelomov, &p, z, &cfg).unwrap();
    group.bench_function("gp_state_z0.9", |b| {
        b.iter(|| states::gp_state_with(&p, black_box(z), &t, &cfg).unwrap())
    });
    group.finish();
}

fn bench_metrics(c: &mut Criterion) {
    let p = ModelParams::default();
    let mut group = c.benchmark_group("nonclassical");
    group.sample_size(10);
    group.bench_function("gp_scan_191", |b| {
        b.iter(|| nonclassical::scan(Family::GilmorePerelomov, &p, -0.95, 0.95, black_box(191)).unwrap())
    });
    group.bench_function("bg_identity_n8", |b| {
        b.iter(|| identity::verify_identity(Family::BarutGirardello, &p, black_box(8), 1e-4).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_meijer, bench_states, bench_metrics);
criterion_main!(benches);
