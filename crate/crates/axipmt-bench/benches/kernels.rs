//! Hot-path benchmarks: closed-form curvature over a grid, the flux-mass
//! limit, the polar bulk-mass quadrature, and the 1D integrators that
//! everything else is built from.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use axipmt::field_core::{simpson, tanh_sinh, HalfPlanePoint, Region, Resolution};
use axipmt::geometry_functionals::{adm_flux_mass, brill_mass, sobolev_norm};
use axipmt::metric_families::{kerr_newman_metric, KerrNewmanParams};
use axipmt::metric_model::AxiMetric;
use axipmt::{ComponentFrame, SobolevTarget};

fn kn() -> AxiMetric {
    kerr_newman_metric(&KerrNewmanParams::new(1.0, 0.5, 0.3).unwrap()).unwrap()
}

fn bench_curvature_grid(c: &mut Criterion) {
    let metric = kn();
    c.bench_function("curvature: 60x120 closed-form grid", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..60 {
                let rho = 0.9 * (10.0f64 / 0.9).powf(i as f64 / 59.0);
                for j in 0..120 {
                    let z = -10.0 + 20.0 * j as f64 / 119.0;
                    let p = HalfPlanePoint::at(rho, z);
                    if metric.in_domain(p) {
                        acc += metric.brill_scalar_curvature(p).unwrap();
                    }
                }
            }
            black_box(acc)
        })
    });
}

fn bench_masses(c: &mut Criterion) {
    let metric = kn();
    let res = Resolution::default();
    c.bench_function("mass: flux limit at r in {50, 100, 200}", |b| {
        b.iter(|| black_box(adm_flux_mass(&metric, &[50.0, 100.0, 200.0], &res).unwrap().value))
    });
    let coarse = Resolution::coarse();
    let ball = Region::ball(0.0, 0.0, 200.0);
    c.bench_function("mass: polar bulk integral (coarse)", |b| {
        b.iter(|| black_box(brill_mass(&metric, &ball, &coarse).unwrap().value))
    });
}

fn bench_sobolev(c: &mut Criterion) {
    let metric = kn();
    let coarse = Resolution::coarse();
    let region = Region::cylinder(1.0, 2.0, 0.1);
    c.bench_function("norms: W^{1,1} deviation on the solid cylinder (coarse)", |b| {
        b.iter_batched(
            || region.clone(),
            |r| {
                black_box(
                    sobolev_norm(
                        &metric,
                        &r,
                        1.0,
                        SobolevTarget::GMinusDelta,
                        ComponentFrame::Orthonormal,
                        &coarse,
                    )
                    .unwrap(),
                )
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_integrators(c: &mut Criterion) {
    let f = |x: f64| (-x * x).exp() + 0.25 * (3.0 * x).sin();
    c.bench_function("quadrature: simpson n=400 on a smooth integrand", |b| {
        b.iter(|| black_box(simpson(f, 0.0, 3.0, 400)))
    });
    c.bench_function("quadrature: tanh-sinh n=96 on a smooth integrand", |b| {
        b.iter(|| black_box(tanh_sinh(f, 0.0, 3.0, 96)))
    });
}

criterion_group!(benches, bench_curvature_grid, bench_masses, bench_sobolev, bench_integrators);
criterion_main!(benches);
