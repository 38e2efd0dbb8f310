//! `ℒρ(g)ℒ⁻¹` in the base coordinate, at a fixed path.
//!
//! For `F(x, x₀) = P(x)·φ(x₀)` the transformed operator acts by the
//! kernel
//!
//! ```text
//! (1/2π)·M(x)·P(x + α̃)·∫ Γ(i(z-v))·c^{-i(z-v)}·e^{-ivα₀}·Φ(v) dv,   Im v = T > 0
//! ```
//!
//! with `c = -∫λ b e^x du`, `Φ = ℒφ` and `M` the path-dependent prefactor
//! of `ρ(g)`. The Γ integral needs `Re c > 0`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, usage, Error, Result};
use crate::fourier::line::{bilateral_laplace, support_interval, LineFunction};
use crate::gamma::lanczos::ln_gamma;
use crate::gamma::quadrature::integrate;
use crate::grid::quad_complex;
use crate::mc::functional::{Functional, ProductForm, SharedFunctional, X0Profile};
use crate::paths::{increment_pairing, wiener_integral, Path};
use crate::rep::{apply_rep, GroupElement, RepContext};
use crate::report::CheckReport;

pub const BASE_KERNEL_TOL: f64 = 1e-4;

const CONTOUR_SHIFT: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseKernelReport {
    pub z: Vec<f64>,
    /// `x₀`-transform of `ρ(g)F` at the path.
    pub direct: Vec<Complex64>,
    /// Γ-kernel integral against `ℒφ`.
    pub kernel: Vec<Complex64>,
    /// `c = -∫λ b e^x du`.
    pub c: Complex64,
    pub arg_c: f64,
    pub max_rel: f64,
    pub tol: f64,
    pub pass: bool,
}

impl BaseKernelReport {
    pub fn to_reports(&self) -> Vec<CheckReport> {
        self.z
            .iter()
            .zip(self.direct.iter().zip(&self.kernel))
            .map(|(z, (d, k))| {
                CheckReport::new("base_gamma_kernel", *d, *k, 0.0, self.pass)
                    .with("z", *z)
                    .with("rel", (d - k).norm() / d.norm().max(k.norm()))
                    .with("arg_c", self.arg_c)
                    .with("tol", self.tol)
            })
            .collect()
    }
}

/// `c = -∫λ b e^x du`, rejected unless `Re c > 0`.
pub fn sector_constant(x: &Path, g: &GroupElement, ctx: &RepContext) -> Result<Complex64> {
    let grid = ctx.grid();
    let e: Vec<Complex64> = ctx
        .lambda()
        .iter()
        .zip(g.b.values())
        .zip(x.values())
        .map(|((l, b), xv)| l * b * xv.exp())
        .collect();
    let c = -quad_complex(grid, &e);
    let arg = c.arg();
    if c == Complex64::default() {
        return domain("∫λ b e^x du = 0: the Γ kernel is undefined");
    }
    if arg.abs() >= FRAC_PI_2 {
        return domain(format!(
            "arg(-∫λ b e^x du) = {arg:.6} outside (-π/2, π/2); arg(∫λ b e^x du) = {:.6}",
            (-c).arg()
        ));
    }
    Ok(c)
}

/// `exp(-Q/4t - S/2t + i(s + k∫α dx))`.
fn path_prefactor(x: &Path, g: &GroupElement, ctx: &RepContext) -> Complex64 {
    let t = ctx.cfg().t();
    let q = g.alpha.energy();
    let s = increment_pairing(ctx.grid(), g.alpha.values(), x.values());
    Complex64::new(
        -q / (4.0 * t) - s / (2.0 * t),
        g.s + ctx.k() * wiener_integral(&g.alpha, x.values()),
    )
    .exp()
}

/// `ℒφ` sampled on a window wide enough for the contour `Im v = T`.
fn profile_line(profile: &X0Profile) -> Result<LineFunction> {
    // e^{-Tx₀} tilts the Gaussian by T·w²
    let reach = profile.support_radius(1e-32) + CONTOUR_SHIFT * profile.width * profile.width;
    let half = profile.center.abs() + reach;
    let n = ((2.0 * half / (profile.width / 24.0)).ceil() as usize).max(64);
    LineFunction::from_fn(half, n, |s| profile.eval(s))
}

/// Checks the Γ-kernel form of `ℒρ_{λ,k}(g)ℒ⁻¹` at the path `x` for the
/// product functional `P·φ`, at the transform variables `z`.
pub fn check_base_kernel(
    x: &Path,
    g: &GroupElement,
    ctx: &RepContext,
    path_part: SharedFunctional,
    profile: X0Profile,
    z: &[f64],
) -> Result<BaseKernelReport> {
    if x.grid() != ctx.grid() || g.grid() != ctx.grid() {
        return usage("path, group element and context must share a grid");
    }
    if z.is_empty() || z.iter().any(|v| !v.is_finite()) {
        return usage("need finite transform variables");
    }
    if !(profile.width > 0.0) {
        return usage("profile width must be positive");
    }
    let c = sector_constant(x, g, ctx)?;
    let alpha0 = g.alpha0();

    let f = ProductForm {
        path: path_part.clone(),
        profile,
    };
    let rho = apply_rep(g, ctx, Arc::new(f))?;
    rho.eval(x, 0.0)?;
    let lo = profile.center - alpha0 - profile.support_radius(1e-18);
    let hi = profile.center - alpha0 + profile.support_radius(1e-18);

    let shifted = x.shifted(g.alpha_tilde().values())?;
    let outer = path_prefactor(x, g, ctx) * path_part.eval(&shifted, 0.0)?;
    let phi = profile_line(&profile)?;
    let ln_c = c.ln();

    let mut direct = Vec::with_capacity(z.len());
    let mut kernel = Vec::with_capacity(z.len());
    let mut max_rel: f64 = 0.0;
    for &zv in z {
        let d = integrate(
            |x0| {
                let v = rho.eval(x, x0).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                Complex64::new(0.0, zv * x0).exp() * v
            },
            lo,
            hi,
            32,
            0.0,
            1e-12,
        )?
        .value
            / TAU.sqrt();

        let integrand = |q: f64| -> Complex64 {
            let v = Complex64::new(q, CONTOUR_SHIFT);
            let w = Complex64::new(0.0, 1.0) * (zv - v);
            let Ok(lg) = ln_gamma(w) else {
                return Complex64::new(f64::NAN, f64::NAN);
            };
            (lg - w * ln_c - Complex64::new(0.0, alpha0) * v).exp() * bilateral_laplace(&phi, v)
        };
        let (a, b) = support_interval(&integrand, zv.min(-profile.freq), zv.max(-profile.freq));
        let k = outer * integrate(integrand, a, b, 64, 0.0, 1e-12)?.value / TAU;
        if !(d.norm().is_finite() && k.norm().is_finite()) {
            return Err(Error::Accuracy {
                achieved: f64::INFINITY,
                requested: BASE_KERNEL_TOL,
            });
        }
        max_rel = max_rel.max((d - k).norm() / d.norm().max(k.norm()));
        direct.push(d);
        kernel.push(k);
    }
    Ok(BaseKernelReport {
        z: z.to_vec(),
        direct,
        kernel,
        c,
        arg_c: c.arg(),
        max_rel,
        tol: BASE_KERNEL_TOL,
        pass: max_rel <= BASE_KERNEL_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::mc::functional::{Constant, ExpLinear};
    use crate::paths::{MeasureConfig, SmoothLoop};
    use crate::sampling::sample_bridge;

    fn setup(k: f64, lambda: f64) -> (Grid, RepContext) {
        let g = Grid::new(128).unwrap();
        (
            g,
            RepContext::real(g, move |_| lambda, k, MeasureConfig::new(1.0).unwrap()),
        )
    }

    fn one() -> SharedFunctional {
        Arc::new(Constant(Complex64::new(1.0, 0.0)))
    }

    #[test]
    fn profile_transform_closed_form() {
        let p = X0Profile {
            center: 0.4,
            width: 0.8,
            freq: 0.5,
        };
        let line = profile_line(&p).unwrap();
        for v in [
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.3, 1.0),
            Complex64::new(2.0, 1.0),
        ] {
            let s = v + p.freq;
            let want = p.width * (Complex64::new(0.0, 1.0) * s * p.center - 0.5 * p.width * p.width * s * s).exp();
            assert!(
                (bilateral_laplace(&line, v) - want).norm() <= 1e-12 * want.norm().max(1e-3),
                "{v}"
            );
        }
    }

    #[test]
    fn constant_path_is_valid_sector() {
        let (g, ctx) = setup(0.0, -1.0);
        let x = Path::from_fn(g, |_| 0.0);
        let e = GroupElement::translation(SmoothLoop::periodic(g, |_| 1.0, |_| 0.0, None));
        let c = sector_constant(&x, &e, &ctx).unwrap();
        assert!((c - Complex64::new(TAU, 0.0)).norm() < 1e-12);
        let r = check_base_kernel(&x, &e, &ctx, one(), X0Profile::gaussian(0.0, 1.0), &[-1.0, 0.0, 1.5]).unwrap();
        assert!(r.pass, "{}", r.max_rel);
    }

    #[test]
    fn sector_violation_names_arg() {
        let (g, ctx) = setup(0.0, 1.0);
        let x = Path::from_fn(g, |_| 0.0);
        let e = GroupElement::translation(SmoothLoop::periodic(g, |_| 1.0, |_| 0.0, None));
        match check_base_kernel(&x, &e, &ctx, one(), X0Profile::gaussian(0.0, 1.0), &[0.0]) {
            Err(Error::Domain(msg)) => assert!(msg.contains("arg"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let zero = GroupElement::identity(g);
        assert!(matches!(sector_constant(&x, &zero, &ctx), Err(Error::Domain(_))));
    }

    #[test]
    fn bridge_paths_agree() {
        let (g, ctx) = setup(0.7, -1.0);
        let cfg = *ctx.cfg();
        let alpha = SmoothLoop::periodic(g, |u| 0.3 + 0.2 * u.sin(), |u| 0.2 * u.cos(), None);
        let b = SmoothLoop::periodic(g, |u| 1.0 + 0.3 * u.cos(), |u| -0.3 * u.sin(), None);
        let e = GroupElement::new(alpha, b, 0.4).unwrap();
        let eta = SmoothLoop::periodic(g, |u| 0.1 * u.sin(), |u| 0.1 * u.cos(), None);
        let p: SharedFunctional = Arc::new(ExpLinear::real(&eta));
        let profile = X0Profile {
            center: 0.3,
            width: 0.9,
            freq: 0.6,
        };
        for i in 0..3 {
            let x = sample_bridge(&g, &cfg, 0.0, 77, i);
            let r = check_base_kernel(&x, &e, &ctx, p.clone(), profile, &[-2.0, 0.0, 1.0, 3.0]).unwrap();
            assert!(r.pass, "path {i}: {}", r.max_rel);
        }
    }

    #[test]
    fn s_phase_tracked_exactly() {
        let (g, ctx) = setup(0.0, -1.0);
        let x = sample_bridge(ctx.grid(), ctx.cfg(), 0.0, 3, 0);
        let b = SmoothLoop::periodic(g, |_| 1.0, |_| 0.0, None);
        let e0 = GroupElement::new(SmoothLoop::zero(g), b.clone(), 0.0).unwrap();
        let e1 = GroupElement::new(SmoothLoop::zero(g), b, 1.1).unwrap();
        let prof = X0Profile::gaussian(0.0, 1.0);
        let r0 = check_base_kernel(&x, &e0, &ctx, one(), prof, &[0.5]).unwrap();
        let r1 = check_base_kernel(&x, &e1, &ctx, one(), prof, &[0.5]).unwrap();
        let ph = Complex64::new(0.0, 1.1).exp();
        assert!((r1.kernel[0] - r0.kernel[0] * ph).norm() <= 1e-14 * r0.kernel[0].norm());
        assert!((r1.direct[0] - r0.direct[0] * ph).norm() <= 1e-12 * r0.direct[0].norm());
    }
}
