use std::f64::consts::TAU;
use std::sync::Arc;

use loopgamma::fourier::{fourier_wiener_check, rep_finite, round_trip, LineFunction};
use loopgamma::loop_gamma::check_kernel_reduction;
use loopgamma::mc::checks::check_translation_exact;
use loopgamma::mc::functional::{Constant, ExpLinear, SharedFunctional};
use loopgamma::rep::checks::check_homomorphism;
use loopgamma::rep::group::{distance, inverse, multiply};
use loopgamma::{
    expect, gamma_classical, sample_bridge, sample_wiener, Complex64, Grid, GroupElement, McParams, MeasureConfig,
    RegGammaParams, RepContext, Sampler, SmoothLoop,
};
use proptest::prelude::*;

fn grid() -> Grid {
    Grid::new(64).unwrap()
}

/// `a₀ + a₁ sin(nu) + a₂(1 - cos(nu))`.
fn trig(g: Grid, a: [f64; 3], n: f64) -> SmoothLoop {
    SmoothLoop::periodic(
        g,
        move |u| a[0] + a[1] * (n * u).sin() + a[2] * (1.0 - (n * u).cos()),
        move |u| n * (a[1] * (n * u).cos() + a[2] * (n * u).sin()),
        None,
    )
}

fn coeffs(r: f64) -> impl Strategy<Value = [f64; 3]> {
    [-r..r, -r..r, -r..r]
}

fn element() -> impl Strategy<Value = GroupElement> {
    (coeffs(0.8), coeffs(1.5), -3.0..3.0f64, 1..3u8).prop_map(|(a, b, s, n)| {
        let g = grid();
        GroupElement::new(trig(g, a, n as f64), trig(g, b, 1.0), s).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_law_is_associative(g1 in element(), g2 in element(), g3 in element(), k in -2.0..2.0f64) {
        let left = multiply(&multiply(&g1, &g2, k).unwrap(), &g3, k).unwrap();
        let right = multiply(&g1, &multiply(&g2, &g3, k).unwrap(), k).unwrap();
        prop_assert!(distance(&left, &right) <= 1e-10);
    }

    #[test]
    fn inverse_is_two_sided(g in element(), k in -2.0..2.0f64) {
        let e = GroupElement::identity(grid());
        prop_assert!(distance(&multiply(&g, &inverse(&g, k), k).unwrap(), &e) <= 1e-10);
        prop_assert!(distance(&multiply(&inverse(&g, k), &g, k).unwrap(), &e) <= 1e-10);
    }

    #[test]
    fn operators_compose_at_opposite_charge(g1 in element(), g2 in element(), k in -1.5..1.5f64, seed in 0..1000u64) {
        let g = grid();
        let cfg = MeasureConfig::new(1.0).unwrap();
        let ctx = RepContext::imaginary(g, |u| 1.0 + 0.3 * u.sin(), k, cfg);
        let f: SharedFunctional = Arc::new(ExpLinear::new(g, g.sample_complex(|u| Complex64::new(0.1 * u.cos(), 0.2))).unwrap());
        let paths: Vec<_> = (0..3).map(|i| sample_wiener(&g, &cfg, seed, i)).collect();
        let r = check_homomorphism(&g1, &g2, &ctx, f, &paths, &[-0.4, 0.3]).unwrap();
        prop_assert!(r.residual <= 1e-10, "{}", r.residual);
    }

    #[test]
    fn cameron_martin_identity_is_exact(a in coeffs(2.0), t in 0.2..4.0f64, seed in 0..10_000u64, bridge in any::<bool>()) {
        let g = grid();
        let cfg = MeasureConfig::new(t).unwrap();
        let mut a = a;
        a[0] = 0.0;
        let y = trig(g, a, 1.0);
        let x = if bridge { sample_bridge(&g, &cfg, 0.3, seed, 0) } else { sample_wiener(&g, &cfg, seed, 0) };
        prop_assert!(check_translation_exact(&x, &y, &cfg).unwrap() <= 1e-12);
    }

    #[test]
    fn bridge_is_pinned(end in -3.0..3.0f64, t in 0.1..5.0f64, seed in any::<u64>(), i in any::<u64>()) {
        let g = grid();
        let x = sample_bridge(&g, &MeasureConfig::new(t).unwrap(), end, seed, i);
        prop_assert_eq!(x.values()[0], 0.0);
        prop_assert_eq!(x.end(), end);
    }

    #[test]
    fn estimates_ignore_worker_count(seed in any::<u64>(), n in 1..3000u64, workers in 1..9usize) {
        let g = grid();
        let cfg = MeasureConfig::new(1.0).unwrap();
        let f = ExpLinear::real(&trig(g, [0.0, 0.2, 0.1], 1.0));
        let one = expect(&f, Sampler::Free, &g, &cfg, &McParams::new(n, seed).with_workers(1)).unwrap();
        let many = expect(&f, Sampler::Free, &g, &cfg, &McParams::new(n, seed).with_workers(workers)).unwrap();
        prop_assert_eq!(one.mean, many.mean);
        prop_assert_eq!(one.stderr, many.stderr);
    }

    #[test]
    fn kernel_reduction_is_pathwise(a in coeffs(0.7), k in -2.0..2.0f64, x0 in -1.0..1.0f64, s in -1.0..1.0f64, seed in 0..500u64) {
        let g = grid();
        let cfg = MeasureConfig::new(1.0).unwrap();
        let ctx = RepContext::real(g, |u| 1.0 + 0.2 * u.cos(), k, cfg);
        let alpha = trig(g, a, 1.0);
        let b = SmoothLoop::periodic(g, |u| -(1.5 + u.sin()), |u| -u.cos(), None);
        let e = GroupElement::new(alpha, b, s).unwrap();
        let x = sample_bridge(&g, &cfg, 0.0, seed, 0);
        let y = sample_bridge(&g, &cfg, 0.0, seed, 1);
        let r = check_kernel_reduction(&x, &y, x0, &e, &ctx, &McParams::new(64, seed)).unwrap();
        prop_assert!(r.residual <= 1e-12, "{}", r.residual);
    }

    #[test]
    fn gamma_recurrence(re in -0.8..3.0f64, im in -2.0..2.0f64, mu in 0.2..3.0f64, t in 0.5..5.0f64) {
        let p = RegGammaParams::new(mu, t, Complex64::new(re, im)).unwrap();
        prop_assert!(loopgamma::gamma::check_recurrence(&p).unwrap() <= 1e-8);
    }

    #[test]
    fn gamma_reflection(re in -3.0..3.0f64, im in 0.1..3.0f64) {
        let z = Complex64::new(re, im);
        let lhs = gamma_classical(z).unwrap() * gamma_classical(1.0 - z).unwrap();
        let rhs = std::f64::consts::PI / (std::f64::consts::PI * z).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm());
    }

    #[test]
    fn finite_rep_composes(j1 in -30i32..30, j2 in -30i32..30, b1 in 0.0..1.0f64, b2 in 0.0..1.0f64, h in -1.0..1.0f64) {
        // b ≥ 0 with Re λ < 0 keeps every factor a contraction
        let f = LineFunction::gaussian_bump(0.0, 0.8, 10.0, 2000).unwrap();
        let step = f.step();
        let lam = Complex64::new(-0.5, h);
        let (a1, a2) = ((j1 as f64 * step).exp(), (j2 as f64 * step).exp());
        let two = rep_finite(a1, b1, lam, &rep_finite(a2, b2, lam, &f).unwrap()).unwrap();
        let one = rep_finite(a1 * a2, a1 * b2 + b1, lam, &f).unwrap();
        prop_assert!(two.max_diff(&one) <= 1e-10);
    }

    #[test]
    fn laplace_round_trip(c in -1.5..1.5f64, w in 0.6..1.4f64) {
        let f = LineFunction::gaussian_bump(c, w, 16.0, 1600).unwrap();
        let back = round_trip(&f, 1.0, 16.0 / w, 800).unwrap();
        prop_assert!(back.max_diff(&f) <= 1e-6);
    }

    #[test]
    fn fourier_wiener_unitary(a in coeffs(0.4), b in coeffs(0.4), t in 0.3..3.0f64) {
        let g = grid();
        let r = fourier_wiener_check(&trig(g, a, 1.0), &trig(g, b, 2.0), &MeasureConfig::new(t).unwrap()).unwrap();
        prop_assert!(r.pass, "{}", r.rel);
    }
}

#[test]
fn constant_functional_has_zero_variance() {
    let g = grid();
    let cfg = MeasureConfig::new(1.0).unwrap();
    let e = expect(
        &Constant(Complex64::new(TAU, 0.0)),
        Sampler::Free,
        &g,
        &cfg,
        &McParams::new(100, 1),
    )
    .unwrap();
    assert_eq!(e.mean.re, TAU);
    assert_eq!(e.stderr, 0.0);
}
