//! The Fourier–Wiener transform on exponential functionals, and pointwise
//! evaluation of `𝓕f(p) = ∫ e^{i∫p x du} f(x) dw₀ᵗ(x)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{usage, Result};
use crate::grid::{quad_product_complex, Grid};
use crate::mc::engine::{run_paths, MCEstimate, McParams};
use crate::mc::functional::Functional;
use crate::mc::oracle::log_gaussian_moment;
use crate::paths::{bridge_mass, MeasureConfig, SmoothLoop};
use crate::report::CheckReport;
use crate::sampling::Sampler;

pub const FOURIER_WIENER_TOL: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierWienerReport {
    /// `⟨Ff_η, Ff_ζ⟩`.
    pub transformed: Complex64,
    /// `⟨f_η, f_ζ⟩`.
    pub original: Complex64,
    pub rel: f64,
    pub tol: f64,
    pub pass: bool,
}

impl FourierWienerReport {
    pub fn to_report(&self) -> CheckReport {
        CheckReport::new(
            "fourier_wiener_unitarity",
            self.transformed,
            self.original,
            0.0,
            self.pass,
        )
        .with("rel", self.rel)
        .with("tol", self.tol)
    }
}

fn as_complex(l: &SmoothLoop, scale: Complex64) -> Vec<Complex64> {
    l.values().iter().map(|v| scale * v).collect()
}

/// Compares `⟨Ff_η, Ff_ζ⟩` with `⟨f_η, f_ζ⟩` for `f_η = e^{⟨η,x⟩}`, where
/// `Ff(y) = E_{2t}[f(x + iy)]`, so `Ff_η(y) = e^{i⟨η,y⟩}·E_{2t}[e^{⟨η,x⟩}]`.
/// Both inner products are Gaussian moments of the free law, evaluated in
/// closed form on the grid.
pub fn fourier_wiener_check(eta: &SmoothLoop, zeta: &SmoothLoop, cfg: &MeasureConfig) -> Result<FourierWienerReport> {
    let grid = eta.grid();
    if zeta.grid() != grid {
        return usage("η and ζ live on different grids");
    }
    let cfg2 = cfg.scaled(2.0)?;
    let one = Complex64::new(1.0, 0.0);
    let m = |v: &[Complex64], c: &MeasureConfig| log_gaussian_moment(grid, v, Sampler::Free, c);
    let diff: Vec<Complex64> = eta
        .values()
        .iter()
        .zip(zeta.values())
        .map(|(a, b)| I * (a - b))
        .collect();
    let sum: Vec<Complex64> = eta
        .values()
        .iter()
        .zip(zeta.values())
        .map(|(a, b)| one * (a + b))
        .collect();
    let transformed = (m(&as_complex(eta, one), &cfg2) + m(&as_complex(zeta, one), &cfg2) + m(&diff, cfg)).exp();
    let original = m(&sum, cfg).exp();
    let rel = (transformed - original).norm() / original.norm();
    Ok(FourierWienerReport {
        transformed,
        original,
        rel,
        tol: FOURIER_WIENER_TOL,
        pass: rel <= FOURIER_WIENER_TOL,
    })
}

/// `𝓕f(p)` by Monte Carlo over bridges pinned at 0, total mass included.
pub fn mathcal_f_eval(
    f: &dyn Functional,
    p: &SmoothLoop,
    cfg: &MeasureConfig,
    params: &McParams,
) -> Result<MCEstimate> {
    p.require_loop()?;
    if p.start() != 0.0 || p.end() != 0.0 {
        return usage("p must vanish at both ends");
    }
    let grid = *p.grid();
    let pc = as_complex(p, I);
    let est = run_paths(&grid, cfg, Sampler::Bridge(0.0), params, 1, |x, out| {
        out[0] = quad_product_complex(&grid, &pc, x.values()).exp() * f.eval(x, 0.0)?;
        Ok(())
    })?;
    Ok(est[0].scale(bridge_mass(0.0, cfg)))
}

/// `𝓕1(p) = u_t(0, 2π)·E[e^{i∫p x}]` in closed form on the grid.
pub fn mathcal_f_one(grid: &Grid, p: &SmoothLoop, cfg: &MeasureConfig) -> Complex64 {
    bridge_mass(0.0, cfg) * log_gaussian_moment(grid, &as_complex(p, I), Sampler::Bridge(0.0), cfg).exp()
}
