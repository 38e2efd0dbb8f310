//! The loop `ax+b` group with its central extension.
//!
//! An element is `(e^α, b, s)`; the product at central charge `k` is
//! `(α₁+α₂, e^{α₁}b₂ + b₁, s₁+s₂+k∫α₁α₂′du)`.

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::grid::{quad_product, Grid};
use crate::paths::SmoothLoop;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub alpha: SmoothLoop,
    pub b: SmoothLoop,
    pub s: f64,
}

impl GroupElement {
    pub fn new(alpha: SmoothLoop, b: SmoothLoop, s: f64) -> Result<Self> {
        if alpha.grid() != b.grid() {
            return usage("α and b live on different grids");
        }
        Ok(Self { alpha, b, s })
    }

    pub fn identity(grid: Grid) -> Self {
        Self {
            alpha: SmoothLoop::zero(grid),
            b: SmoothLoop::zero(grid),
            s: 0.0,
        }
    }

    /// `(e^α, 0, s)`.
    pub fn exponential(alpha: SmoothLoop, s: f64) -> Self {
        let g = *alpha.grid();
        Self {
            alpha,
            b: SmoothLoop::zero(g),
            s,
        }
    }

    /// `(1, b, 0)`.
    pub fn translation(b: SmoothLoop) -> Self {
        let g = *b.grid();
        Self {
            alpha: SmoothLoop::zero(g),
            b,
            s: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.alpha.grid()
    }

    /// `α₀ = α(0)`.
    pub fn alpha0(&self) -> f64 {
        self.alpha.start()
    }

    /// Based part `α̃ = α - α₀`.
    pub fn alpha_tilde(&self) -> SmoothLoop {
        self.alpha.based()
    }

    pub fn is_loop_element(&self) -> bool {
        self.alpha.is_loop() && self.b.is_loop()
    }

    pub fn to_record(&self, k: f64) -> GroupRecord {
        GroupRecord {
            alpha: self.alpha.values().to_vec(),
            b: self.b.values().to_vec(),
            s: self.s,
            k,
        }
    }

    /// Rebuilds an element from samples; derivatives come from finite
    /// differences. Returns the element and its central charge.
    pub fn from_record(rec: &GroupRecord) -> Result<(Self, f64)> {
        if rec.alpha.len() < 3 {
            return usage("group element needs at least 3 samples");
        }
        let grid = Grid::new(rec.alpha.len() - 1)?;
        let alpha = SmoothLoop::from_samples(grid, rec.alpha.clone())?;
        let b = SmoothLoop::from_samples(grid, rec.b.clone())?;
        if !rec.s.is_finite() || !rec.k.is_finite() {
            return usage("s and k must be finite");
        }
        Ok((Self::new(alpha, b, rec.s)?, rec.k))
    }
}

/// JSON form `{alpha, b, s, k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub alpha: Vec<f64>,
    pub b: Vec<f64>,
    pub s: f64,
    pub k: f64,
}

/// `k∫α₁α₂′du` with the analytic derivative of `α₂`.
pub fn cocycle(a1: &SmoothLoop, a2: &SmoothLoop, k: f64) -> f64 {
    k * quad_product(a1.grid(), a1.values(), a2.d1())
}

pub fn multiply(g1: &GroupElement, g2: &GroupElement, k: f64) -> Result<GroupElement> {
    if g1.grid() != g2.grid() {
        return usage("group elements live on different grids");
    }
    let alpha = g1.alpha.add(&g2.alpha)?;
    let n = g1.grid().len();
    let mut bv = Vec::with_capacity(n);
    let mut bd = Vec::with_capacity(n);
    for j in 0..n {
        let e = g1.alpha.values()[j].exp();
        bv.push(e * g2.b.values()[j] + g1.b.values()[j]);
        bd.push(e * (g1.alpha.d1()[j] * g2.b.values()[j] + g2.b.d1()[j]) + g1.b.d1()[j]);
    }
    let b = SmoothLoop::new(*g1.grid(), bv, bd, None)?;
    let s = g1.s + g2.s + cocycle(&g1.alpha, &g2.alpha, k);
    Ok(GroupElement { alpha, b, s })
}

pub fn inverse(g: &GroupElement, k: f64) -> GroupElement {
    let alpha = g.alpha.scaled(-1.0);
    let n = g.grid().len();
    let mut bv = Vec::with_capacity(n);
    let mut bd = Vec::with_capacity(n);
    for j in 0..n {
        let e = (-g.alpha.values()[j]).exp();
        bv.push(-e * g.b.values()[j]);
        bd.push(e * (g.alpha.d1()[j] * g.b.values()[j] - g.b.d1()[j]));
    }
    let b = SmoothLoop::new(*g.grid(), bv, bd, None).expect("finite inverse");
    // s' solves s + s' + k∫α·(-α)′ = 0
    let s = -g.s + cocycle(&g.alpha, &g.alpha, k);
    GroupElement { alpha, b, s }
}

/// Largest coordinate difference between two elements.
pub fn distance(g1: &GroupElement, g2: &GroupElement) -> f64 {
    let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    d(g1.alpha.values(), g2.alpha.values())
        .max(d(g1.b.values(), g2.b.values()))
        .max((g1.s - g2.s).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::new(128).unwrap()
    }

    fn sin(g: Grid) -> SmoothLoop {
        SmoothLoop::periodic(g, f64::sin, f64::cos, Some(&|u: f64| -u.sin()))
    }

    fn cos(g: Grid) -> SmoothLoop {
        SmoothLoop::periodic(g, f64::cos, |u| -u.sin(), Some(&|u: f64| -u.cos()))
    }

    #[test]
    fn zero_alpha_adds_components() {
        let g = grid();
        let b1 = SmoothLoop::periodic(g, |u| 1.0 + u.sin(), f64::cos, None);
        let b2 = SmoothLoop::periodic(g, |u| 2.0 * u.cos(), |u| -2.0 * u.sin(), None);
        let g1 = GroupElement::new(SmoothLoop::zero(g), b1.clone(), 0.5).unwrap();
        let g2 = GroupElement::new(SmoothLoop::zero(g), b2.clone(), 0.25).unwrap();
        let p = multiply(&g1, &g2, 3.0).unwrap();
        assert_eq!(p.s, 0.75);
        for j in 0..g.len() {
            assert_eq!(p.b.values()[j], b1.values()[j] + b2.values()[j]);
        }
    }

    #[test]
    fn sin_cos_cocycle() {
        let g = grid();
        for k in [1.0, -2.0, 0.5] {
            let p = multiply(
                &GroupElement::exponential(sin(g), 0.0),
                &GroupElement::exponential(cos(g), 0.0),
                k,
            )
            .unwrap();
            assert!((p.s + k * PI).abs() < 1e-10, "{}", p.s);
        }
    }

    #[test]
    fn identity_and_inverse() {
        let g = grid();
        let e = GroupElement::identity(g);
        let x = GroupElement::new(sin(g), cos(g).scaled(0.3), 1.2).unwrap();
        assert_eq!(distance(&multiply(&x, &e, 2.0).unwrap(), &x), 0.0);
        assert_eq!(distance(&multiply(&e, &x, 2.0).unwrap(), &x), 0.0);
        assert_eq!(distance(&inverse(&e, 1.0), &e), 0.0);
        for k in [0.0, 1.0, -1.5] {
            assert!(distance(&multiply(&x, &inverse(&x, k), k).unwrap(), &e) < 1e-12);
            assert!(distance(&multiply(&inverse(&x, k), &x, k).unwrap(), &e) < 1e-12);
        }
    }

    #[test]
    fn inverse_of_pure_exponential() {
        let g = grid();
        let a = cos(g);
        let inv = inverse(&GroupElement::exponential(a.clone(), 0.0), 2.0);
        let want = 2.0 * quad_product(&g, a.values(), a.d1());
        assert!((inv.s - want).abs() < 1e-15);
        assert!(inv.b.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn record_roundtrip() {
        let g = grid();
        let x = GroupElement::new(sin(g), cos(g), 0.4).unwrap();
        let json = serde_json::to_string(&x.to_record(1.0)).unwrap();
        let rec: GroupRecord = serde_json::from_str(&json).unwrap();
        let (y, k) = GroupElement::from_record(&rec).unwrap();
        assert_eq!(k, 1.0);
        assert_eq!(y.alpha.values(), x.alpha.values());
        assert_eq!(y.s, 0.4);
    }
}
