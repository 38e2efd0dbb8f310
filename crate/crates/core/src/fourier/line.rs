//! The `ax+b` group on `L²(ℝ, dt)` and the bilateral Laplace transform.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, usage, Error, Result};
use crate::gamma::lanczos::ln_gamma;
use crate::gamma::quadrature::integrate;
use crate::report::CheckReport;

/// Edge values must be below this fraction of the peak.
pub const EDGE_TOL: f64 = 1e-14;

pub const FINITE_KERNEL_TOL: f64 = 1e-4;

/// Samples on the uniform grid `t_j = -L + j·h`, `j = 0..n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineFunction {
    half_width: f64,
    values: Vec<Complex64>,
}

impl LineFunction {
    pub fn new(half_width: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return usage(format!("window half-width must be positive, got {half_width}"));
        }
        if values.len() < 3 {
            return usage("need at least 3 samples");
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return usage("samples must be finite");
        }
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let edge = values[0].norm().max(values[values.len() - 1].norm());
        if edge > EDGE_TOL * peak.max(1.0) {
            return usage(format!("values at ±L are {edge:e}; widen the window"));
        }
        Ok(Self { half_width, values })
    }

    /// Samples `f` on `n` intervals of `[-L, L]`.
    pub fn from_fn(half_width: f64, n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        if n < 2 {
            return usage("need at least 2 intervals");
        }
        let h = 2.0 * half_width / n as f64;
        Self::new(half_width, (0..=n).map(|j| f(-half_width + j as f64 * h)).collect())
    }

    /// `e^{-(t-c)²/(2w²)}`.
    pub fn gaussian_bump(center: f64, width: f64, half_width: f64, n: usize) -> Result<Self> {
        Self::from_fn(half_width, n, |t| {
            let d = (t - center) / width;
            Complex64::new((-0.5 * d * d).exp(), 0.0)
        })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.values.len() - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.step()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Linear interpolation; 0 outside the window.
    pub fn at(&self, t: f64) -> Complex64 {
        let x = (t + self.half_width) / self.step();
        let n = self.values.len() - 1;
        if x < 0.0 || x > n as f64 {
            return Complex64::default();
        }
        let j = (x.floor() as usize).min(n - 1);
        let r = x - j as f64;
        self.values[j] * (1.0 - r) + self.values[j + 1] * r
    }

    /// `∫|f|²dt` by the trapezoid rule.
    pub fn norm_sqr(&self) -> f64 {
        let h = self.step();
        let n = self.values.len() - 1;
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        h * (s - 0.5 * (self.values[0].norm_sqr() + self.values[n].norm_sqr()))
    }

    pub fn max_diff(&self, other: &LineFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `R_λ(g(e^α, b))f(t) = e^{λ b e^t} f(t + α)`.
pub fn rep_finite(a: f64, b: f64, lambda: Complex64, f: &LineFunction) -> Result<LineFunction> {
    if !(a > 0.0 && a.is_finite()) {
        return usage(format!("a must be positive, got {a}"));
    }
    let alpha = a.ln();
    let peak = f.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let l = f.half_width;
    for (j, v) in f.values.iter().enumerate() {
        let s = f.node(j) - alpha;
        if v.norm() > EDGE_TOL * peak && (s < -l - 1e-12 || s > l + 1e-12) {
            return usage(format!("shift by α = {alpha} moves the support out of [-{l}, {l}]"));
        }
    }
    // shifts by whole grid steps index the samples directly
    let steps = alpha / f.step();
    let whole = (steps - steps.round()).abs() < 1e-9;
    let n = f.values.len() as i64;
    let mut out = Vec::with_capacity(f.values.len());
    for j in 0..f.values.len() {
        let t = f.node(j);
        let g = if whole {
            let i = j as i64 + steps.round() as i64;
            if (0..n).contains(&i) {
                f.values[i as usize]
            } else {
                Complex64::default()
            }
        } else {
            f.at(t + alpha)
        };
        out.push(if g == Complex64::default() {
            g
        } else {
            (lambda * b * t.exp()).exp() * g
        });
    }
    Ok(LineFunction {
        half_width: l,
        values: out,
    })
}

/// `ℒf(p) = (1/√2π)∫ e^{ipt} f(t) dt` by the trapezoid rule.
pub fn bilateral_laplace(f: &LineFunction, p: Complex64) -> Complex64 {
    let h = f.step();
    let n = f.values.len() - 1;
    let mut s = Complex64::default();
    for (j, v) in f.values.iter().enumerate() {
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        s += w * (Complex64::new(0.0, 1.0) * p * f.node(j)).exp() * v;
    }
    s * h / TAU.sqrt()
}

/// Samples of `ℒf` on the line `Im p = T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LaplaceLine {
    pub shift: f64,
    pub half_width: f64,
    pub values: Vec<Complex64>,
}

impl LaplaceLine {
    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.values.len() - 1) as f64
    }

    pub fn point(&self, j: usize) -> Complex64 {
        Complex64::new(-self.half_width + j as f64 * self.step(), self.shift)
    }
}

/// `ℒf` on `q + iT`, `q ∈ [-Q, Q]` with `n` intervals.
pub fn laplace_on_line(f: &LineFunction, shift: f64, half_width: f64, n: usize) -> Result<LaplaceLine> {
    if n < 2 || !(half_width > 0.0) {
        return usage("line needs a positive half-width and at least 2 intervals");
    }
    if (shift.abs() * f.half_width) > 700.0 {
        return Err(Error::Accuracy {
            achieved: f64::INFINITY,
            requested: EDGE_TOL,
        });
    }
    let mut line = LaplaceLine {
        shift,
        half_width,
        values: Vec::with_capacity(n + 1),
    };
    let h = 2.0 * half_width / n as f64;
    for j in 0..=n {
        line.values
            .push(bilateral_laplace(f, Complex64::new(-half_width + j as f64 * h, shift)));
    }
    Ok(line)
}

/// `ℒ⁻¹F(t) = (1/√2π)∫_{ℝ+iT} e^{-ipt} F(p) dp` by the trapezoid rule on
/// the sampled line. Fails with an accuracy error when `F` has not decayed
/// at the ends of the line.
pub fn inverse_laplace(line: &LaplaceLine, t: f64) -> Result<Complex64> {
    let n = line.values.len() - 1;
    let peak = line.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let edge = line.values[0].norm().max(line.values[n].norm());
    if edge > 1e-12 * peak {
        return Err(Error::Accuracy {
            achieved: edge / peak,
            requested: 1e-12,
        });
    }
    let h = line.step();
    let mut s = Complex64::default();
    for (j, v) in line.values.iter().enumerate() {
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        s += w * (Complex64::new(0.0, -1.0) * line.point(j) * t).exp() * v;
    }
    Ok(s * h / TAU.sqrt())
}

/// `ℒ⁻¹ℒf` back on the grid of `f`.
pub fn round_trip(f: &LineFunction, shift: f64, half_width: f64, n: usize) -> Result<LineFunction> {
    let line = laplace_on_line(f, shift, half_width, n)?;
    let mut out = Vec::with_capacity(f.values.len());
    for j in 0..f.values.len() {
        out.push(inverse_laplace(&line, f.node(j))?);
    }
    Ok(LineFunction {
        half_width: f.half_width,
        values: out,
    })
}

/// Outcome of the dual-route check of `ℒR_λ(g)ℒ⁻¹` against its Γ kernel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteKernelReport {
    pub t1: Vec<f64>,
    /// `ℒ(R_λ(g)f)(t₁)` by transforming the represented function.
    pub direct: Vec<Complex64>,
    /// `(1/2π)∫ Γ(i(t₁-p)) c^{-i(t₁-p)} a^{-ip} ℒf(p) dp` on `Im p = 1`.
    pub kernel: Vec<Complex64>,
    pub max_rel: f64,
    pub tol: f64,
    pub pass: bool,
}

impl FiniteKernelReport {
    pub fn to_reports(&self) -> Vec<CheckReport> {
        self.t1
            .iter()
            .zip(self.direct.iter().zip(&self.kernel))
            .map(|(t, (d, k))| {
                CheckReport::new("finite_gamma_kernel", *d, *k, 0.0, self.pass)
                    .with("t1", *t)
                    .with("rel", (d - k).norm() / d.norm().max(k.norm()))
                    .with("tol", self.tol)
            })
            .collect()
    }
}

const CONTOUR_SHIFT: f64 = 1.0;

/// `(1/2π)∫_{ℝ+iT} Γ(i(t₁-p))·c^{-i(t₁-p)}·e^{-ipα}·F(p) dp`, `c > 0`.
fn kernel_route(t1: f64, c: f64, alpha: f64, f: &LineFunction) -> Result<Complex64> {
    let ln_c = c.ln();
    let integrand = |q: f64| -> Complex64 {
        let p = Complex64::new(q, CONTOUR_SHIFT);
        let w = Complex64::new(0.0, 1.0) * (t1 - p);
        let Ok(lg) = ln_gamma(w) else {
            return Complex64::new(f64::NAN, f64::NAN);
        };
        (lg - w * ln_c - Complex64::new(0.0, alpha) * p).exp() * bilateral_laplace(f, p)
    };
    let (lo, hi) = support_interval(&integrand, t1.min(0.0), t1.max(0.0));
    let r = integrate(integrand, lo, hi, 64, 1e-14, 1e-12)?;
    Ok(r.value / TAU)
}

/// Interval containing `[a, b]` outside of which `|f|` stays below `1e-16`
/// of its largest value on `[a, b]`.
pub(crate) fn support_interval(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (f64, f64) {
    let steps = ((b - a) / 0.25).ceil().max(1.0) as usize;
    let peak = (0..=steps)
        .map(|j| f(a + (b - a) * j as f64 / steps as f64).norm())
        .fold(0.0, f64::max);
    let reach = |dir: f64, from: f64| {
        let mut r = 4.0;
        while r < 400.0 {
            let edge = (0..4)
                .map(|j| f(from + dir * (r + j as f64)).norm())
                .fold(0.0, f64::max);
            if edge <= 1e-16 * peak {
                break;
            }
            r *= 1.25;
        }
        from + dir * r
    };
    (reach(-1.0, a), reach(1.0, b))
}

/// Compares `ℒR_λ(g)ℒ⁻¹` applied to `ℒf` at the points `t1` by direct
/// transformation and by the Γ-kernel integral. Requires `-λb > 0`.
pub fn check_finite_kernel(a: f64, b: f64, lambda: f64, f: &LineFunction, t1: &[f64]) -> Result<FiniteKernelReport> {
    let c = -lambda * b;
    if !(c > 0.0) || !c.is_finite() {
        return domain(format!("-λb = {c} must be positive for the Γ kernel"));
    }
    if !(a > 0.0) {
        return usage(format!("a must be positive, got {a}"));
    }
    let rf = rep_finite(a, b, Complex64::new(lambda, 0.0), f)?;
    let alpha = a.ln();
    let mut direct = Vec::with_capacity(t1.len());
    let mut kernel = Vec::with_capacity(t1.len());
    let mut max_rel: f64 = 0.0;
    for &t in t1 {
        let d = bilateral_laplace(&rf, Complex64::new(t, 0.0));
        let k = kernel_route(t, c, alpha, f)?;
        max_rel = max_rel.max((d - k).norm() / d.norm().max(k.norm()));
        direct.push(d);
        kernel.push(k);
    }
    Ok(FiniteKernelReport {
        t1: t1.to_vec(),
        direct,
        kernel,
        max_rel,
        tol: FINITE_KERNEL_TOL,
        pass: max_rel <= FINITE_KERNEL_TOL,
    })
}
