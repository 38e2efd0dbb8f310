//! The operators `ρ_{λ,k}(g)` on functionals of a path and a base point.
//!
//! For `g = (e^α, b, s)` and `α = α₀ + α̃`,
//!
//! ```text
//! (ρ(g)F)(x, x₀) = exp(-Q(α)/4t - S(α, x)/2t + e^{x₀}∫λ b e^{x} du + i(s + k∫α dx))
//!                  · F(x + α̃, x₀ + α₀)
//! ```
//!
//! where `Q(α) = ∫α′²du` and `S(α, x) = ∫α′dx` both use increment slopes of
//! `α`, so that `|ρ(g)F|²` carries exactly the Cameron–Martin weight of the
//! shift `α̃`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, usage, Result};
use crate::grid::{quad_complex, Grid};
use crate::mc::functional::{Functional, SharedFunctional};
use crate::paths::{increment_pairing, wiener_integral, MeasureConfig, Path, SmoothLoop};
use crate::rep::group::GroupElement;

/// Representation parameters: `λ(u)`, central charge `k`, variance `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepContext {
    grid: Grid,
    lambda: Vec<Complex64>,
    k: f64,
    cfg: MeasureConfig,
}

impl RepContext {
    pub fn new(grid: Grid, lambda: Vec<Complex64>, k: f64, cfg: MeasureConfig) -> Result<Self> {
        grid.check_len(lambda.len(), "λ")?;
        if lambda.iter().any(|l| !l.re.is_finite() || !l.im.is_finite()) || !k.is_finite() {
            return usage("λ and k must be finite");
        }
        Ok(Self { grid, lambda, k, cfg })
    }

    /// `λ(u) = i·h(u)`.
    pub fn imaginary(grid: Grid, h: impl Fn(f64) -> f64, k: f64, cfg: MeasureConfig) -> Self {
        let lambda = grid.sample_complex(|u| Complex64::new(0.0, h(u)));
        Self { grid, lambda, k, cfg }
    }

    /// Real `λ(u) = h(u)`.
    pub fn real(grid: Grid, h: impl Fn(f64) -> f64, k: f64, cfg: MeasureConfig) -> Self {
        let lambda = grid.sample_complex(|u| Complex64::new(h(u), 0.0));
        Self { grid, lambda, k, cfg }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn lambda(&self) -> &[Complex64] {
        &self.lambda
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn cfg(&self) -> &MeasureConfig {
        &self.cfg
    }

    pub fn with_k(&self, k: f64) -> Self {
        Self { k, ..self.clone() }
    }

    pub fn with_lambda(&self, lambda: Vec<Complex64>) -> Result<Self> {
        Self::new(self.grid, lambda, self.k, self.cfg)
    }

    /// Purely imaginary `λ`: the operators are unitary.
    pub fn is_unitary(&self) -> bool {
        self.lambda.iter().all(|l| l.re == 0.0)
    }
}

/// Checks that `Re(λ(u)b(u)e^{x(u)+x₀}) ≤ 0` at every node, so the
/// exponent `∫λ b e^{x+x₀}` has nonpositive real part for every path and every
/// `x₀` in the range.
pub fn semigroup_guard(ctx: &RepContext, g: &GroupElement, x0_range: (f64, f64)) -> Result<()> {
    if g.grid() != ctx.grid() {
        return usage("group element and context live on different grids");
    }
    if !(x0_range.0 <= x0_range.1) || !x0_range.1.exp().is_finite() {
        return usage(format!("invalid x₀ range {:?}", x0_range));
    }
    for (j, (l, b)) in ctx.lambda.iter().zip(g.b.values()).enumerate() {
        let re = l.re * b;
        if re > 0.0 {
            return domain(format!(
                "Re(λ·b) = {re:e} > 0 at node {j} (u = {:.6}): the exponent ∫λ b e^(x+x₀) is unbounded",
                ctx.grid.node(j)
            ));
        }
    }
    Ok(())
}

/// Path-independent data of `ρ(g)`.
#[derive(Debug, Clone)]
pub(crate) struct Prefactor {
    alpha: SmoothLoop,
    alpha0: f64,
    alpha_tilde: Vec<f64>,
    lb: Vec<Complex64>,
    s: f64,
    k: f64,
    t: f64,
    energy: f64,
}

impl Prefactor {
    fn new(g: &GroupElement, ctx: &RepContext) -> Self {
        let lb = ctx.lambda.iter().zip(g.b.values()).map(|(l, b)| l * b).collect();
        Self {
            alpha: g.alpha.clone(),
            alpha0: g.alpha0(),
            alpha_tilde: g.alpha_tilde().values().to_vec(),
            lb,
            s: g.s,
            k: ctx.k,
            t: ctx.cfg.t(),
            energy: g.alpha.energy(),
        }
    }

    /// `(x-dependent log-prefactor without x₀, ∫λ b e^x du)`.
    fn path_parts(&self, x: &[f64]) -> (Complex64, Complex64) {
        let grid = self.alpha.grid();
        let s_term = increment_pairing(grid, self.alpha.values(), x);
        let a_term = wiener_integral(&self.alpha, x);
        let log = Complex64::new(
            -self.energy / (4.0 * self.t) - s_term / (2.0 * self.t),
            self.s + self.k * a_term,
        );
        let j = if self.lb.iter().all(|v| *v == Complex64::default()) {
            Complex64::default()
        } else {
            let e: Vec<Complex64> = self.lb.iter().zip(x).map(|(l, xv)| l * xv.exp()).collect();
            quad_complex(grid, &e)
        };
        (log, j)
    }

    fn value(&self, parts: (Complex64, Complex64), x0: f64) -> Complex64 {
        (parts.0 + x0.exp() * parts.1).exp()
    }
}

/// `ρ_{λ,k}(g)F` as a functional.
#[derive(Clone)]
pub struct Represented {
    pre: Prefactor,
    f: SharedFunctional,
}

impl Represented {
    /// The multiplicative factor at `(x, x₀)`, without `F`.
    pub fn multiplier(&self, x: &Path, x0: f64) -> Complex64 {
        self.pre.value(self.pre.path_parts(x.values()), x0)
    }

    fn shifted(&self, x: &Path) -> Path {
        let mut y = x.clone();
        y.shift_in_place(&self.pre.alpha_tilde, 1.0);
        y
    }
}

impl Functional for Represented {
    fn eval(&self, x: &Path, x0: f64) -> Result<Complex64> {
        let parts = self.pre.path_parts(x.values());
        let inner = self.f.eval(&self.shifted(x), x0 + self.pre.alpha0)?;
        Ok(self.pre.value(parts, x0) * inner)
    }

    fn eval_x0_batch(&self, x: &Path, x0: &[f64], out: &mut [Complex64]) -> Result<()> {
        let parts = self.pre.path_parts(x.values());
        let shifted: Vec<f64> = x0.iter().map(|a| a + self.pre.alpha0).collect();
        self.f.eval_x0_batch(&self.shifted(x), &shifted, out)?;
        for (o, &a) in out.iter_mut().zip(x0) {
            *o *= self.pre.value(parts, a);
        }
        Ok(())
    }

    fn bounded(&self) -> bool {
        false
    }

    fn differentiable(&self) -> bool {
        self.f.differentiable()
    }
}

/// `ρ_{λ,k}(g)F`. Outside unitary mode the semigroup sign condition is
/// enforced first.
pub fn apply_rep(g: &GroupElement, ctx: &RepContext, f: SharedFunctional) -> Result<Represented> {
    if g.grid() != ctx.grid() {
        return usage("group element and context live on different grids");
    }
    if !ctx.is_unitary() {
        semigroup_guard(ctx, g, (f64::NEG_INFINITY, 0.0))?;
    }
    Ok(Represented {
        pre: Prefactor::new(g, ctx),
        f,
    })
}

/// Shared-pointer convenience for composing operators.
pub fn apply_rep_arc(g: &GroupElement, ctx: &RepContext, f: SharedFunctional) -> Result<SharedFunctional> {
    Ok(Arc::new(apply_rep(g, ctx, f)?))
}
