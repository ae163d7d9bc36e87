use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use swanson_bench::reference_params;
use swanson_core::diffop::{compose, residual, sample_points, Hierarchy, OperatorId};
use swanson_core::params::{solve_couplings, solve_forward};
use swanson_core::specialfn::{kummer, laguerre};
use swanson_core::spectrum::{j_integral, numeric_levels, phi_plus, JMethod};
use swanson_core::verify::{verify_forward, VerifySettings};
use swanson_core::{ModelParams, Side};

fn params(c: &mut Criterion) {
    c.bench_function("solve_forward", |b| b.iter(|| solve_forward(black_box(1.3), black_box(0.7), black_box(2.1))));
    let m = ModelParams::new(2.0, 0.5, 0.1);
    c.bench_function("solve_couplings", |b| b.iter(|| solve_couplings(black_box(&m))));
}

fn special(c: &mut Criterion) {
    c.bench_function("laguerre_n12", |b| b.iter(|| laguerre(12, black_box(2.5), black_box(7.3))));
    c.bench_function("kummer_n12", |b| b.iter(|| kummer(12, black_box(3.5), black_box(7.3))));
}

fn operators(c: &mut Criterion) {
    let h = Hierarchy::with_reference_gauge(reference_params()).unwrap();
    let pts = sample_points(20, true);
    let (a, ad, hm) = (h.build(OperatorId::A).unwrap(), h.build(OperatorId::ADag).unwrap(), h.build(OperatorId::HMinusHermitian).unwrap());
    c.bench_function("factorization_residual_20pts", |b| b.iter(|| residual(&hm, &compose(&ad, &a).unwrap(), black_box(&pts))));
    let (eta, big_m, big_p) = (
        h.build(OperatorId::Eta1Constructed).unwrap(),
        h.build(OperatorId::HMinusGauge).unwrap(),
        h.build(OperatorId::HPlus).unwrap(),
    );
    c.bench_function("intertwining_residual_20pts", |b| {
        b.iter(|| residual(&compose(&eta, &big_m).unwrap(), &compose(&big_p, &eta).unwrap(), black_box(&pts)))
    });
}

fn spectra(c: &mut Criterion) {
    let fp = reference_params();
    c.bench_function("phi_plus_n5", |b| b.iter(|| phi_plus(&fp, 5, black_box(1.2))));
    c.bench_function("j_quadrature_n5", |b| b.iter(|| j_integral(&fp, 5, 5, JMethod::Quadrature)));
    let mut g = c.benchmark_group("fd");
    g.sample_size(10);
    g.bench_function("richardson_2000_4000_three_levels", |b| {
        b.iter(|| numeric_levels(&fp, Side::Plus, 3, 1e-3, 10.0, &[2000, 4000]))
    });
    g.bench_function("verify_reference", |b| b.iter(|| verify_forward(&fp, &VerifySettings::default())));
    g.finish();
}

criterion_group!(benches, params, special, operators, spectra);
criterion_main!(benches);
