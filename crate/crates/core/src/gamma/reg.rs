//! The regularized Gamma function
//! `Γ_{μ,t}(z) = ∫ e^{-μe^x} e^{zx} e^{-x²/2t} dx` and its identities.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Error, Result};
use crate::gamma::lanczos::gamma_classical;
use crate::gamma::quadrature::integrate;
use crate::report::CheckReport;

/// Relative tail bound on each side of the truncated interval.
const TAIL: f64 = 1e-16;
/// Absolute quadrature target relative to `∫|integrand|`.
const QUAD_REL: f64 = 1e-14;

pub const RECURRENCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegGammaParams {
    pub mu: f64,
    pub t: f64,
    pub z: Complex64,
}

impl RegGammaParams {
    pub fn new(mu: f64, t: f64, z: Complex64) -> Result<Self> {
        let p = Self { mu, t, z };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return usage(format!("mu must be positive, got {}", self.mu));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return usage(format!("t must be positive, got {}", self.t));
        }
        if !(self.z.re.is_finite() && self.z.im.is_finite()) {
            return usage("z must be finite");
        }
        Ok(())
    }

    pub fn with_z(self, z: Complex64) -> Self {
        Self { z, ..self }
    }

    fn integrand(&self, power: i32) -> Integrand {
        Integrand {
            mu: self.mu,
            inv_t: 1.0 / self.t,
            z: self.z,
            power,
        }
    }
}

/// `x^power · exp(-μe^x + zx - x²·inv_t/2)`. `inv_t = 0` is the `t → ∞`
/// limit and `μ = 0` the pure Gaussian.
#[derive(Debug, Clone, Copy)]
struct Integrand {
    mu: f64,
    inv_t: f64,
    z: Complex64,
    power: i32,
}

impl Integrand {
    fn ell(&self, x: f64) -> f64 {
        -self.mu * x.exp() + self.z.re * x - 0.5 * self.inv_t * x * x
    }

    fn ell1(&self, x: f64) -> f64 {
        -self.mu * x.exp() + self.z.re - self.inv_t * x
    }

    fn ell2(&self, x: f64) -> f64 {
        -self.mu * x.exp() - self.inv_t
    }

    /// Maximizer of the concave `ℓ`.
    fn peak(&self) -> Result<f64> {
        let a = self.z.re;
        if self.mu == 0.0 {
            if self.inv_t == 0.0 {
                return domain("integral diverges with mu = 0 and no Gaussian factor");
            }
            return Ok(a / self.inv_t);
        }
        if self.inv_t == 0.0 {
            if a <= 0.0 {
                return domain(format!("limit integral diverges for Re z = {a} <= 0"));
            }
            return Ok((a / self.mu).ln());
        }
        // ℓ′ is strictly decreasing; bracket then bisect
        let (mut lo, mut hi) = (-1.0, 1.0);
        while self.ell1(lo) < 0.0 {
            lo *= 2.0;
        }
        while self.ell1(hi) > 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.ell1(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Bound on `∫_R^∞ |x|^p e^{ℓ-ℓ*}` (or the mirrored left tail) from
    /// the tangent line of the concave `ℓ` at `R`.
    fn tail(&self, r: f64, lstar: f64) -> f64 {
        let s = self.ell1(r).abs();
        if s == 0.0 {
            return f64::INFINITY;
        }
        let e = (self.ell(r) - lstar).exp();
        match self.power {
            0 => e / s,
            _ => e * (r.abs() / s + 1.0 / (s * s)),
        }
    }

    fn eval(&self) -> Result<Complex64> {
        let peak = self.peak()?;
        let lstar = self.ell(peak);
        let width = 1.0 / (-self.ell2(peak)).sqrt();
        let mass = (TAU).sqrt() * width * if self.power == 0 { 1.0 } else { peak.abs().max(width) };
        let target = TAIL * mass;

        let mut step = width;
        let mut right = peak + step;
        while self.tail(right, lstar) > target {
            step *= 1.25;
            right = peak + step;
            if !right.is_finite() || step > 1e8 {
                return Err(Error::Accuracy {
                    achieved: self.tail(right, lstar),
                    requested: target,
                });
            }
        }
        let mut step = width;
        let mut left = peak - step;
        while self.tail(left, lstar) > target {
            step *= 1.25;
            left = peak - step;
            if !left.is_finite() || step > 1e8 {
                return Err(Error::Accuracy {
                    achieved: self.tail(left, lstar),
                    requested: target,
                });
            }
        }

        let b = self.z.im;
        let pieces = ((right - left) * (1.0 + b.abs()) / (2.0 * width.min(1.0))).ceil();
        let n0 = (pieces as usize).clamp(8, 4000);
        let me = *self;
        let f = move |x: f64| {
            let v = Complex64::new(me.ell(x) - lstar, b * x).exp();
            if me.power == 0 {
                v
            } else {
                v * x
            }
        };
        let r = integrate(f, left, right, n0, QUAD_REL * mass, 0.0)?;
        Ok(r.value * lstar.exp())
    }
}

/// `Γ_{μ,t}(z)`.
pub fn gamma_reg(p: &RegGammaParams) -> Result<Complex64> {
    p.validate()?;
    p.integrand(0).eval()
}

/// `dΓ_{μ,t}/dz = ∫ x·e^{-μe^x}e^{zx}e^{-x²/2t} dx`.
pub fn gamma_reg_prime(p: &RegGammaParams) -> Result<Complex64> {
    p.validate()?;
    p.integrand(1).eval()
}

/// `∫ e^{-x²/2t} dx`, the `μ = 0, z = 0` case; equals `√(2πt)`.
pub fn gaussian_self_test(t: f64) -> Result<Complex64> {
    if !(t > 0.0) {
        return usage("t must be positive");
    }
    Integrand {
        mu: 0.0,
        inv_t: 1.0 / t,
        z: Complex64::default(),
        power: 0,
    }
    .eval()
}

/// `∫ e^{-μe^x} e^{zx} dx` by quadrature (the `t = ∞` integrand).
pub fn limit_by_quadrature(mu: f64, z: Complex64) -> Result<Complex64> {
    if !(mu > 0.0) {
        return usage("mu must be positive");
    }
    Integrand {
        mu,
        inv_t: 0.0,
        z,
        power: 0,
    }
    .eval()
}

/// Terms of `μΓ(z+1) = zΓ(z) - Γ′(z)/t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recurrence {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub gamma: Complex64,
    pub residual: f64,
}

pub fn recurrence_terms(p: &RegGammaParams) -> Result<Recurrence> {
    let g = gamma_reg(p)?;
    let g1 = gamma_reg(&p.with_z(p.z + 1.0))?;
    let gp = gamma_reg_prime(p)?;
    let lhs = p.mu * g1;
    let rhs = p.z * g - gp / p.t;
    Ok(Recurrence {
        lhs,
        rhs,
        gamma: g,
        residual: (lhs - rhs).norm() / g.norm(),
    })
}

/// `|μΓ(z+1) - zΓ(z) + Γ′(z)/t| / |Γ(z)|`.
pub fn check_recurrence(p: &RegGammaParams) -> Result<f64> {
    Ok(recurrence_terms(p)?.residual)
}

pub fn recurrence_report(p: &RegGammaParams) -> Result<CheckReport> {
    let r = recurrence_terms(p)?;
    Ok(
        CheckReport::new("gamma_reg_recurrence", r.lhs, r.rhs, 0.0, r.residual <= RECURRENCE_TOL)
            .with("residual", r.residual)
            .with("tol", RECURRENCE_TOL)
            .with("mu", p.mu)
            .with("t", p.t)
            .with("z_re", p.z.re)
            .with("z_im", p.z.im),
    )
}

/// `Γ_{μ,t}(z+1)` along a sequence of `t` compared with the `t → ∞` value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub z: Complex64,
    pub mu: f64,
    pub ts: Vec<f64>,
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    /// `μ^{-(z+1)}Γ(z+1)`.
    pub oracle: Complex64,
    /// The same limit by direct quadrature of `∫e^{-μe^x}e^{(z+1)x}dx`.
    pub oracle_quadrature: Complex64,
    /// `μ^{-z}Γ(z)`, logged for comparison only.
    pub printed: Complex64,
    pub monotone: bool,
    /// `log10(err_i / err_{i+1}) / log10(t_{i+1} / t_i)` for consecutive pairs.
    pub rates: Vec<f64>,
    pub tol: f64,
    pub pass: bool,
}

pub const LIMIT_TOL: f64 = 1e-2;

pub fn check_large_t_limit(z: Complex64, mu: f64, ts: &[f64]) -> Result<LimitReport> {
    if !(z.re + 1.0 > 0.0) {
        return domain(format!("Re(z+1) = {} <= 0: the limiting integral diverges", z.re + 1.0));
    }
    if !(mu > 0.0) {
        return usage("mu must be positive");
    }
    if ts.is_empty() {
        return usage("need at least one t");
    }
    let z1 = z + 1.0;
    let oracle = Complex64::new(mu, 0.0).powc(-z1) * gamma_classical(z1)?;
    let oracle_quadrature = limit_by_quadrature(mu, z1)?;
    let printed = match gamma_classical(z) {
        Ok(g) => Complex64::new(mu, 0.0).powc(-z) * g,
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    };
    let mut values = Vec::with_capacity(ts.len());
    for &t in ts {
        values.push(gamma_reg(&RegGammaParams::new(mu, t, z1)?)?);
    }
    let errors: Vec<f64> = values.iter().map(|v| (v - oracle).norm()).collect();
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let rates = errors
        .windows(2)
        .zip(ts.windows(2))
        .map(|(e, t)| (e[0] / e[1]).log10() / (t[1] / t[0]).log10())
        .collect();
    let tol = LIMIT_TOL * oracle.norm().max(1.0);
    let pass = monotone && *errors.last().expect("non-empty") <= tol;
    Ok(LimitReport {
        z,
        mu,
        ts: ts.to_vec(),
        values,
        errors,
        oracle,
        oracle_quadrature,
        printed,
        monotone,
        rates,
        tol,
        pass,
    })
}

impl LimitReport {
    pub fn to_reports(&self) -> Vec<CheckReport> {
        self.ts
            .iter()
            .zip(&self.values)
            .zip(&self.errors)
            .map(|((t, v), e)| {
                CheckReport::new("gamma_reg_large_t", *v, self.oracle, 0.0, self.pass)
                    .with("t", *t)
                    .with("error", *e)
                    .with("tol", self.tol)
                    .with("printed_re", self.printed.re)
                    .with("printed_im", self.printed.im)
            })
            .collect()
    }
}

/// `(1/2π)∫ e^{iηw} e^{-e^η} dη`, understood as `Γ(iw)/2π`, from the
/// absolutely convergent split
/// `∫_{-∞}^0 e^{iηw}(e^{-e^η}-1)dη + 1/(iw) + ∫_0^∞ e^{iηw}e^{-e^η}dη`.
pub fn laplace_kernel_value(w: f64) -> Result<Complex64> {
    if w == 0.0 {
        return domain("kernel has a pole at w = 0");
    }
    if !w.is_finite() {
        return usage("w must be finite");
    }
    // tails: |e^{-e^η}-1| ≤ e^η below -40, e^{-e^η} < e^{-54} above 4
    let n = (8.0 * (1.0 + w.abs())) as usize;
    let left = integrate(
        |eta| Complex64::new(0.0, eta * w).exp() * (-eta.exp()).exp_m1(),
        -40.0,
        0.0,
        n,
        1e-15,
        0.0,
    )?;
    let right = integrate(
        |eta| Complex64::new(-eta.exp(), eta * w).exp(),
        0.0,
        4.0,
        n.min(64),
        1e-15,
        0.0,
    )?;
    let pole = Complex64::new(0.0, -1.0 / w);
    Ok((left.value + pole + right.value) / TAU)
}

/// `|Γ(iw)| = √(π / (w sinh πw))`.
pub fn gamma_imaginary_modulus(w: f64) -> f64 {
    (PI / (w * (PI * w).sinh())).sqrt()
}
