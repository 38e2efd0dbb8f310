use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use loopgamma::fourier::{laplace_on_line, round_trip, LineFunction};
use loopgamma::gamma::check_recurrence;
use loopgamma::{gamma_classical, gamma_reg, Complex64, RegGammaParams};
use std::hint::black_box;

fn regularized(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma_reg");
    for t in [1.0, 100.0, 1e4] {
        let p = RegGammaParams::new(1.0, t, Complex64::new(1.5, 0.5)).unwrap();
        group.bench_with_input(BenchmarkId::new("value", t), &p, |b, p| {
            b.iter(|| gamma_reg(p).unwrap())
        });
    }
    let p = RegGammaParams::new(0.7, 2.0, Complex64::new(0.8, -1.2)).unwrap();
    group.bench_function("recurrence", |b| b.iter(|| check_recurrence(&p).unwrap()));
    group.bench_function("lanczos", |b| {
        b.iter(|| gamma_classical(black_box(Complex64::new(2.3, 1.1))).unwrap())
    });
    group.finish();
}

fn laplace(c: &mut Criterion) {
    let f = LineFunction::gaussian_bump(0.3, 1.0, 16.0, 1600).unwrap();
    let mut group = c.benchmark_group("laplace");
    group.sample_size(10);
    group.bench_function("forward_line_800", |b| {
        b.iter(|| laplace_on_line(&f, 1.0, 16.0, 800).unwrap())
    });
    group.bench_function("round_trip_1600", |b| {
        b.iter(|| round_trip(&f, 1.0, 16.0, 800).unwrap())
    });
    group.finish();
}

criterion_group!(benches, regularized, laplace);
criterion_main!(benches);
