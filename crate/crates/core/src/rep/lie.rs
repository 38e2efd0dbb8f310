//! Lie-algebra generators: `D_{α,k}` by central differences of
//! `ρ(e^{εα}, 0, 0)`, and the multiplication operators `T_b`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{usage, Result};
use crate::grid::{quad_complex, Grid};
use crate::mc::functional::{Functional, SharedFunctional};
use crate::paths::{Path, SmoothLoop};
use crate::rep::group::GroupElement;
use crate::rep::operator::{apply_rep, RepContext, Represented};

pub const DEFAULT_EPS: f64 = 1e-4;

/// `D_{α,k}F = d/dε ρ(e^{εα}, 0, 0)F` at `ε = 0`.
#[derive(Clone)]
pub struct LieD {
    eps: f64,
    plus: Represented,
    minus: Represented,
    /// Half-step pair for Richardson extrapolation.
    half: Option<(Represented, Represented)>,
}

/// Builds `D_{α,k}F` with step `eps`; `richardson` cancels the `O(ε²)` term.
pub fn lie_d(alpha: &SmoothLoop, ctx: &RepContext, f: SharedFunctional, eps: f64, richardson: bool) -> Result<LieD> {
    if !f.differentiable() {
        return usage("D needs a functional flagged differentiable");
    }
    if !(eps > 0.0) {
        return usage(format!("finite-difference step must be positive, got {eps}"));
    }
    let step =
        |e: f64| -> Result<Represented> { apply_rep(&GroupElement::exponential(alpha.scaled(e), 0.0), ctx, f.clone()) };
    let half = if richardson {
        Some((step(eps / 2.0)?, step(-eps / 2.0)?))
    } else {
        None
    };
    Ok(LieD {
        eps,
        plus: step(eps)?,
        minus: step(-eps)?,
        half,
    })
}

impl Functional for LieD {
    fn eval(&self, x: &Path, x0: f64) -> Result<Complex64> {
        let full = (self.plus.eval(x, x0)? - self.minus.eval(x, x0)?) / (2.0 * self.eps);
        match &self.half {
            None => Ok(full),
            Some((p, m)) => {
                let h = (p.eval(x, x0)? - m.eval(x, x0)?) / self.eps;
                Ok((4.0 * h - full) / 3.0)
            }
        }
    }

    fn differentiable(&self) -> bool {
        true
    }
}

/// `T_b`: multiplication by `e^{x₀}∫λ(u)b(u)e^{x(u)}du`, optionally applied to `F`.
#[derive(Clone)]
pub struct LieT {
    grid: Grid,
    lb: Vec<Complex64>,
    f: Option<SharedFunctional>,
}

pub fn lie_t(b: &SmoothLoop, ctx: &RepContext) -> Result<LieT> {
    if b.grid() != ctx.grid() {
        return usage("b and context live on different grids");
    }
    Ok(LieT {
        grid: *b.grid(),
        lb: ctx.lambda().iter().zip(b.values()).map(|(l, v)| l * v).collect(),
        f: None,
    })
}

impl LieT {
    pub fn applied_to(&self, f: SharedFunctional) -> LieT {
        LieT {
            f: Some(f),
            ..self.clone()
        }
    }

    pub fn multiplier(&self, x: &Path, x0: f64) -> Complex64 {
        let e: Vec<Complex64> = self.lb.iter().zip(x.values()).map(|(l, v)| l * v.exp()).collect();
        x0.exp() * quad_complex(&self.grid, &e)
    }
}

impl Functional for LieT {
    fn eval(&self, x: &Path, x0: f64) -> Result<Complex64> {
        let m = self.multiplier(x, x0);
        match &self.f {
            None => Ok(m),
            Some(f) => Ok(m * f.eval(x, x0)?),
        }
    }

    fn differentiable(&self) -> bool {
        self.f.as_ref().is_none_or(|f| f.differentiable())
    }
}

pub fn lie_d_arc(alpha: &SmoothLoop, ctx: &RepContext, f: SharedFunctional, eps: f64) -> Result<SharedFunctional> {
    Ok(Arc::new(lie_d(alpha, ctx, f, eps, false)?))
}
