//! The kernel of `𝓕ρ(g)𝓕*` and its reduction to a loop Gamma functional.
//!
//! ```text
//! 𝕂(x - y, x₀) = e^{is} e^{-Q(α)/4t} ∫ exp(i∫p(x-y)du + ∫λ b e^{p+x₀}du
//!                                        + ik∫α dp - (1/2t)∫α′dp) dw₀ᵗ(p)
//! ```
//!
//! Integrating the `dp` terms by parts (`p(0) = p(2π) = 0`) gives
//! `e^{is}e^{-Q/4t}·Γ̂_μ(z_eff)` with `μ = -λ b e^{x₀}` and
//! `z_eff = i(x - y) - ikα′ + (1/2t)α″`.

use num_complex::Complex64;

use crate::error::{domain, usage, Result};
use crate::grid::{quad, quad_product_complex, Grid};
use crate::loop_gamma::{ComplexLoopArgument, MuWeight};
use crate::mc::engine::{run_paths, MCEstimate, McParams};
use crate::paths::{bridge_mass, increment_pairing, wiener_integral, Path};
use crate::rep::{GroupElement, RepContext};
use crate::sampling::Sampler;

const I: Complex64 = Complex64::new(0.0, 1.0);

struct KernelData {
    grid: Grid,
    diff: Vec<f64>,
    lb: Vec<f64>,
    x0: f64,
    g: GroupElement,
    k: f64,
    t: f64,
    /// `e^{is}e^{-Q/4t}`.
    prefactor: Complex64,
}

fn prepare(x: &Path, y: &Path, x0: f64, g: &GroupElement, ctx: &RepContext) -> Result<KernelData> {
    let grid = *ctx.grid();
    if x.grid() != &grid || y.grid() != &grid || g.grid() != &grid {
        return usage("paths, group element and context must share a grid");
    }
    g.alpha.require_loop()?;
    if ctx.lambda().iter().any(|l| l.im != 0.0) {
        return usage("the kernel is defined for real λ");
    }
    if !x0.is_finite() {
        return usage("x₀ must be finite");
    }
    let lb: Vec<f64> = ctx.lambda().iter().zip(g.b.values()).map(|(l, b)| l.re * b).collect();
    if let Some(j) = lb.iter().position(|v| *v > 0.0) {
        return domain(format!(
            "μ = -λ·b·e^x₀ = {:e} < 0 at node {j} (u = {:.6})",
            -lb[j] * x0.exp(),
            grid.node(j)
        ));
    }
    let t = ctx.cfg().t();
    let q = g.alpha.energy();
    Ok(KernelData {
        grid,
        diff: x.values().iter().zip(y.values()).map(|(a, b)| a - b).collect(),
        lb,
        x0,
        g: g.clone(),
        k: ctx.k(),
        t,
        prefactor: Complex64::new(-q / (4.0 * t), g.s).exp(),
    })
}

impl KernelData {
    /// The displayed integrand on one bridge path, prefactor included.
    fn direct(&self, p: &[f64]) -> Complex64 {
        let grid = &self.grid;
        let osc: Vec<f64> = p.iter().zip(&self.diff).map(|(a, b)| a * b).collect();
        let e: Vec<f64> = self.lb.iter().zip(p).map(|(l, v)| l * (v + self.x0).exp()).collect();
        let stieltjes_k = wiener_integral(&self.g.alpha, p);
        let stieltjes_t = increment_pairing(grid, self.g.alpha.values(), p);
        let expo = I * quad(grid, &osc) + quad(grid, &e) + I * (self.k * stieltjes_k) - stieltjes_t / (2.0 * self.t);
        self.prefactor * expo.exp()
    }

    fn mu(&self) -> Vec<f64> {
        let e0 = self.x0.exp();
        // -0.0 for b = 0 would still pass the sign check; normalize it
        self.lb.iter().map(|l| (-l * e0).max(0.0)).collect()
    }

    /// `i(x - y) - ikα′ + (1/2t)α″`, with `α″` by second differences.
    fn z_eff(&self) -> Vec<Complex64> {
        let d2 = self.g.alpha.second_differences();
        self.diff
            .iter()
            .zip(self.g.alpha.d1())
            .zip(&d2)
            .map(|((d, a1), a2)| Complex64::new(a2 / (2.0 * self.t), d - self.k * a1))
            .collect()
    }

    /// `prefactor·exp(∫p z_eff - ∫μ e^p)` on one path.
    fn reduced(&self, z: &[Complex64], mu: &[f64], p: &[f64]) -> Complex64 {
        let lin = quad_product_complex(&self.grid, z, p);
        let e: Vec<f64> = mu.iter().zip(p).map(|(m, v)| m * v.exp()).collect();
        self.prefactor * (lin - quad(&self.grid, &e)).exp()
    }
}

/// `𝕂(x - y, x₀)` by Monte Carlo over the bridge pinned at 0, total mass
/// included.
pub fn kernel_k(
    x: &Path,
    y: &Path,
    x0: f64,
    g: &GroupElement,
    ctx: &RepContext,
    params: &McParams,
) -> Result<MCEstimate> {
    let d = prepare(x, y, x0, g, ctx)?;
    let cfg = ctx.cfg();
    let est = run_paths(&d.grid, cfg, Sampler::Bridge(0.0), params, 1, |p, out| {
        out[0] = d.direct(p.values());
        Ok(())
    })?;
    Ok(est[0].scale(bridge_mass(0.0, cfg)))
}

/// Both sides of the reduction on identical paths.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelReduction {
    /// Largest `|direct - reduced| / max(|direct|, |reduced|)` over the paths.
    pub residual: f64,
    pub prefactor: Complex64,
    pub z_eff: ComplexLoopArgument,
    pub mu: MuWeight,
    pub direct: MCEstimate,
    pub reduced: MCEstimate,
}

/// Evaluates the displayed kernel integrand and `prefactor·Γ̂` integrand
/// on the same `params.n` bridge paths.
pub fn check_kernel_reduction(
    x: &Path,
    y: &Path,
    x0: f64,
    g: &GroupElement,
    ctx: &RepContext,
    params: &McParams,
) -> Result<KernelReduction> {
    let d = prepare(x, y, x0, g, ctx)?;
    let z = d.z_eff();
    let mu = d.mu();
    let cfg = ctx.cfg();
    let est = run_paths(&d.grid, cfg, Sampler::Bridge(0.0), params, 2, |p, out| {
        out[0] = d.direct(p.values());
        out[1] = d.reduced(&z, &mu, p.values());
        Ok(())
    })?;
    // a maximum is not a mean: rescan the same streams serially
    let mut residual: f64 = 0.0;
    let mut path = Sampler::Bridge(0.0).sample(&d.grid, cfg, params.seed, 0);
    for i in 0..params.n {
        Sampler::Bridge(0.0).sample_into(&d.grid, cfg, params.seed, i, path.values_mut());
        let a = d.direct(path.values());
        let b = d.reduced(&z, &mu, path.values());
        let scale = a.norm().max(b.norm());
        if scale > 0.0 {
            residual = residual.max((a - b).norm() / scale);
        }
    }
    let mass = bridge_mass(0.0, cfg);
    Ok(KernelReduction {
        residual,
        prefactor: d.prefactor,
        z_eff: ComplexLoopArgument::new(d.grid, z)?,
        mu: MuWeight::new(d.grid, mu)?,
        direct: est[0].scale(mass),
        reduced: est[1].scale(mass),
    })
}
