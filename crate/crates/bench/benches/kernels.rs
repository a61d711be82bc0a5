use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pairglow_bench::{packet, sweep_points, tau_grid};
use pairglow_core::{
    a_spectral, find_critical_times, mu, mu_bar, sigma_exact, trace_concurrence,
    InitialElectronicState, MotionDistribution,
};

fn pattern(c: &mut Criterion) {
    let xs: Vec<f64> = (0..1000).map(|i| i as f64 * 0.025).collect();
    c.bench_function("mu/1000 points", |b| {
        b.iter(|| xs.iter().map(|&x| mu(1.0, black_box(x))).sum::<f64>())
    });
    let w = packet();
    c.bench_function("mu_bar/radial_gaussian", |b| {
        b.iter(|| mu_bar(1.0, black_box(&w)).unwrap())
    });
    let mut g = c.benchmark_group("a_spectral");
    for x in [1.0, 100.0, 1e4] {
        g.bench_with_input(BenchmarkId::from_parameter(x), &x, |b, &x| {
            b.iter(|| a_spectral(1.0, black_box(x), 1e-6, 50.0).unwrap())
        });
    }
    g.finish();
}

fn roots(c: &mut Criterion) {
    c.bench_function("find_critical_times/single", |b| {
        b.iter(|| find_critical_times(black_box(0.5), 1.0, black_box(1.0)).unwrap())
    });
    let pts = sweep_points(10);
    c.bench_function("find_critical_times/100 points", |b| {
        b.iter(|| {
            pts.iter()
                .map(|&(p, q, m)| find_critical_times(p, q, m).unwrap().c_stationary)
                .sum::<f64>()
        })
    });
}

fn dynamics(c: &mut Criterion) {
    let init = InitialElectronicState::new(0.5, 1.0).unwrap();
    let grid = tau_grid(10.0, 1000);
    c.bench_function("trace_concurrence/1001 steps", |b| {
        b.iter(|| trace_concurrence(&init, black_box(0.7), &grid).unwrap())
    });
    let excited = InitialElectronicState::new(1.0, 1.0).unwrap();
    let point = MotionDistribution::delta(1.0).unwrap();
    c.bench_function("sigma_exact/delta tau=3", |b| {
        b.iter(|| sigma_exact(&excited, 1.0, &point, 1e-6, black_box(3.0), 50.0).unwrap())
    });
}

criterion_group!(benches, pattern, roots, dynamics);
criterion_main!(benches);
