//! Functionals `F(x, x₀)` of a path and a real base coordinate.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{usage, Result};
use crate::grid::{quad_product_complex, Grid};
use crate::paths::{Path, SmoothLoop};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Evaluation contract: deterministic and side-effect free.
pub trait Functional: Send + Sync {
    fn eval(&self, x: &Path, x0: f64) -> Result<Complex64>;

    /// Evaluates at several base points on the same path. Implementations
    /// override this when path-dependent work can be shared.
    fn eval_x0_batch(&self, x: &Path, x0: &[f64], out: &mut [Complex64]) -> Result<()> {
        for (o, &a) in out.iter_mut().zip(x0) {
            *o = self.eval(x, a)?;
        }
        Ok(())
    }

    /// `|F| ≤ C` for some constant.
    fn bounded(&self) -> bool {
        false
    }

    /// Smooth along Cameron–Martin directions, so central differences make sense.
    fn differentiable(&self) -> bool {
        false
    }
}

pub type SharedFunctional = Arc<dyn Functional>;

impl<F: Functional + ?Sized> Functional for Arc<F> {
    fn eval(&self, x: &Path, x0: f64) -> Result<Complex64> {
        (**self).eval(x, x0)
    }
    fn eval_x0_batch(&self, x: &Path, x0: &[f64], out: &mut [Complex64]) -> Result<()> {
        (**self).eval_x0_batch(x, x0, out)
    }
    fn bounded(&self) -> bool {
        (**self).bounded()
    }
    fn differentiable(&self) -> bool {
        (**self).differentiable()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Constant(pub Complex64);

impl Functional for Constant {
    fn eval(&self, _: &Path, _: f64) -> Result<Complex64> {
        Ok(self.0)
    }
    fn bounded(&self) -> bool {
        true
    }
    fn differentiable(&self) -> bool {
        true
    }
}

/// `exp(⟨η, x⟩)` with `⟨η, x⟩ = ∫ η(u) x(u) du` by the trapezoid rule.
#[derive(Debug, Clone)]
pub struct ExpLinear {
    grid: Grid,
    eta: Vec<Complex64>,
}

impl ExpLinear {
    pub fn new(grid: Grid, eta: Vec<Complex64>) -> Result<Self> {
        grid.check_len(eta.len(), "η")?;
        Ok(Self { grid, eta })
    }

    pub fn real(eta: &SmoothLoop) -> Self {
        Self {
            grid: *eta.grid(),
            eta: eta.values().iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn eta(&self) -> &[Complex64] {
        &self.eta
    }

    pub fn exponent(&self, x: &[f64]) -> Complex64 {
        quad_product_complex(&self.grid, &self.eta, x)
    }
}

impl Functional for ExpLinear {
    fn eval(&self, x: &Path, _: f64) -> Result<Complex64> {
        Ok(self.exponent(x.values()).exp())
    }
    fn bounded(&self) -> bool {
        self.eta.iter().all(|e| e.re == 0.0)
    }
    fn differentiable(&self) -> bool {
        true
    }
}

/// `x(u_k)^p`.
#[derive(Debug, Clone, Copy)]
pub struct NodePower {
    pub node: usize,
    pub power: i32,
}

impl Functional for NodePower {
    fn eval(&self, x: &Path, _: f64) -> Result<Complex64> {
        match x.values().get(self.node) {
            Some(v) => Ok(Complex64::new(v.powi(self.power), 0.0)),
            None => usage(format!("node {} outside the grid", self.node)),
        }
    }
    fn differentiable(&self) -> bool {
        true
    }
}

/// `exp(i·ω·x(u_k))`.
#[derive(Debug, Clone, Copy)]
pub struct NodeCharacteristic {
    pub node: usize,
    pub freq: f64,
}

impl Functional for NodeCharacteristic {
    fn eval(&self, x: &Path, _: f64) -> Result<Complex64> {
        match x.values().get(self.node) {
            Some(v) => Ok((I * self.freq * v).exp()),
            None => usage(format!("node {} outside the grid", self.node)),
        }
    }
    fn bounded(&self) -> bool {
        true
    }
    fn differentiable(&self) -> bool {
        true
    }
}

/// Smooth, effectively compactly supported profile in the base coordinate:
/// `exp(-(x₀-c)²/(2w²) + iωx₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct X0Profile {
    pub center: f64,
    pub width: f64,
    pub freq: f64,
}

impl X0Profile {
    pub fn gaussian(center: f64, width: f64) -> Self {
        Self {
            center,
            width,
            freq: 0.0,
        }
    }

    pub fn eval(&self, x0: f64) -> Complex64 {
        let d = (x0 - self.center) / self.width;
        Complex64::new(-0.5 * d * d, self.freq * x0).exp()
    }

    /// Half-width beyond which the modulus drops below `tol`.
    pub fn support_radius(&self, tol: f64) -> f64 {
        self.width * (2.0 * (1.0 / tol).ln()).sqrt()
    }
}

/// `F(x)·φ(x₀)`.
#[derive(Clone)]
pub struct ProductForm {
    pub path: SharedFunctional,
    pub profile: X0Profile,
}

impl Functional for ProductForm {
    fn eval(&self, x: &Path, x0: f64) -> Result<Complex64> {
        Ok(self.path.eval(x, x0)? * self.profile.eval(x0))
    }
    fn eval_x0_batch(&self, x: &Path, x0: &[f64], out: &mut [Complex64]) -> Result<()> {
        let base = self.path.eval(x, 0.0)?;
        for (o, &a) in out.iter_mut().zip(x0) {
            *o = base * self.profile.eval(a);
        }
        Ok(())
    }
    fn bounded(&self) -> bool {
        self.path.bounded()
    }
    fn differentiable(&self) -> bool {
        self.path.differentiable()
    }
}

/// Closure-backed functional with explicit flags.
pub struct FnFunctional<F> {
    f: F,
    bounded: bool,
    differentiable: bool,
}

impl<F> FnFunctional<F>
where
    F: Fn(&Path, f64) -> Result<Complex64> + Send + Sync,
{
    pub fn new(f: F) -> Self {
        Self {
            f,
            bounded: false,
            differentiable: false,
        }
    }

    pub fn bounded(mut self) -> Self {
        self.bounded = true;
        self
    }

    pub fn differentiable(mut self) -> Self {
        self.differentiable = true;
        self
    }
}

impl<F> Functional for FnFunctional<F>
where
    F: Fn(&Path, f64) -> Result<Complex64> + Send + Sync,
{
    fn eval(&self, x: &Path, x0: f64) -> Result<Complex64> {
        (self.f)(x, x0)
    }
    fn bounded(&self) -> bool {
        self.bounded
    }
    fn differentiable(&self) -> bool {
        self.differentiable
    }
}

/// `d/dε F(x + εy, x₀)` at 0 by a central difference.
pub fn directional_derivative(f: &dyn Functional, x: &Path, x0: f64, y: &[f64], eps: f64) -> Result<Complex64> {
    if !f.differentiable() {
        return usage("functional is not flagged differentiable");
    }
    x.grid().check_len(y.len(), "direction")?;
    if y[0] != 0.0 {
        return usage("direction must vanish at u = 0");
    }
    let mut p = x.clone();
    p.shift_in_place(y, eps);
    let plus = f.eval(&p, x0)?;
    let mut q = x.clone();
    q.shift_in_place(y, -eps);
    let minus = f.eval(&q, x0)?;
    Ok((plus - minus) / (2.0 * eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directional_derivative_of_exp_linear() {
        let g = Grid::new(64).unwrap();
        let eta = SmoothLoop::periodic(g, |u| 0.1 * u.cos(), |u| -0.1 * u.sin(), None);
        let f = ExpLinear::real(&eta);
        let x = Path::from_fn(g, |u| (2.0 * u).sin());
        let y = g.sample(|u| u.sin());
        let got = directional_derivative(&f, &x, 0.0, &y, 1e-4).unwrap();
        // d/dε exp(⟨η, x+εy⟩) = ⟨η, y⟩·exp(⟨η, x⟩)
        let want = f.exponent(&y) * f.eval(&x, 0.0).unwrap();
        assert!((got - want).norm() < 1e-8);
    }

    #[test]
    fn rejects_non_differentiable() {
        let g = Grid::new(8).unwrap();
        let f = FnFunctional::new(|_: &Path, _| Ok(Complex64::new(1.0, 0.0)));
        let x = Path::from_fn(g, |u| u);
        assert!(directional_derivative(&f, &x, 0.0, &[0.0; 9], 1e-3).is_err());
    }

    #[test]
    fn product_batch_matches_pointwise() {
        let g = Grid::new(16).unwrap();
        let pf = ProductForm {
            path: Arc::new(NodeCharacteristic { node: 8, freq: 1.3 }),
            profile: X0Profile {
                center: 0.2,
                width: 0.5,
                freq: 0.7,
            },
        };
        let x = Path::from_fn(g, |u| u.sin());
        let x0 = [-1.0, 0.0, 0.5, 2.0];
        let mut out = [Complex64::default(); 4];
        pf.eval_x0_batch(&x, &x0, &mut out).unwrap();
        for (o, a) in out.iter().zip(x0) {
            assert!((o - pf.eval(&x, a).unwrap()).norm() < 1e-15);
        }
    }
}
