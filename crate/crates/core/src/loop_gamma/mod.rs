//! The loop Gamma functional
//!
//! ```text
//! Γ̂_μ(z) = ∫ exp(∫ p z du - ∫ μ e^p du) dw₀ᵗ(p)
//! ```
//!
//! over the bridge pinned at 0, estimated as `u_t(0, 2π)·E[…]` with the
//! probability bridge. Functional derivatives are realized as exact
//! insertions under the path integral.

pub mod kernel;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Result};
use crate::grid::{quad, quad_product_complex, Grid};
use crate::mc::checks::SE_GATE;
use crate::mc::engine::{run, MCEstimate, McParams};
use crate::mc::oracle::moment_tilt;
use crate::mc::within_se;
use crate::paths::{bridge_mass, increment_pairing, log_cm_weight_raw, MeasureConfig, Path, SmoothLoop};
use crate::report::CheckReport;
use crate::sampling::Sampler;

pub use kernel::{check_kernel_reduction, kernel_k, KernelReduction};

/// `z(u)` sampled on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexLoopArgument {
    grid_m: usize,
    z: Vec<Complex64>,
}

impl ComplexLoopArgument {
    pub fn new(grid: Grid, z: Vec<Complex64>) -> Result<Self> {
        grid.check_len(z.len(), "z")?;
        if z.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return usage("z must be finite at every node");
        }
        Ok(Self { grid_m: grid.m(), z })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.sample_complex(f))
    }

    pub fn constant(grid: Grid, c: Complex64) -> Self {
        Self {
            grid_m: grid.m(),
            z: vec![c; grid.len()],
        }
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.grid_m).expect("validated on construction")
    }

    pub fn values(&self) -> &[Complex64] {
        &self.z
    }

    /// `z + ε·ξ` for a real direction `ξ`.
    pub fn perturbed(&self, xi: &[f64], eps: f64) -> Result<Self> {
        self.grid().check_len(xi.len(), "direction")?;
        Self::new(self.grid(), self.z.iter().zip(xi).map(|(z, x)| z + eps * x).collect())
    }

    fn real_part(&self) -> Vec<f64> {
        self.z.iter().map(|v| v.re).collect()
    }
}

/// `μ(u) ≥ 0` sampled on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuWeight {
    grid_m: usize,
    mu: Vec<f64>,
}

impl MuWeight {
    pub fn new(grid: Grid, mu: Vec<f64>) -> Result<Self> {
        grid.check_len(mu.len(), "μ")?;
        if let Some(j) = mu.iter().position(|v| !v.is_finite()) {
            return usage(format!("μ is not finite at node {j}"));
        }
        if let Some(j) = mu.iter().position(|v| *v < 0.0) {
            return domain(format!("μ = {} < 0 at node {j}", mu[j]));
        }
        Ok(Self { grid_m: grid.m(), mu })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.sample(f))
    }

    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.len()])
    }

    pub fn zero(grid: Grid) -> Self {
        Self {
            grid_m: grid.m(),
            mu: vec![0.0; grid.len()],
        }
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.grid_m).expect("validated on construction")
    }

    pub fn values(&self) -> &[f64] {
        &self.mu
    }

    /// `μ + ε·e_v/w_v`, so that `∫(μ + …)e^p du` gains `ε·e^{p(v)}`.
    pub fn with_node_bump(&self, node: usize, eps: f64) -> Result<Self> {
        let g = self.grid();
        if node > g.m() {
            return usage(format!("node {node} outside the grid"));
        }
        let mut mu = self.mu.clone();
        mu[node] += eps / g.weight(node);
        Self::new(g, mu)
    }
}

/// `g` with `g(0) = g(2π) = 0`, its derivative and second derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    g: SmoothLoop,
}

impl TestFunction {
    /// From closures; the boundary values must vanish up to `1e-12` and are
    /// then set to exactly 0.
    pub fn new(grid: Grid, g: impl Fn(f64) -> f64, dg: impl Fn(f64) -> f64, d2g: impl Fn(f64) -> f64) -> Result<Self> {
        let mut v = grid.sample(g);
        let m = grid.m();
        for j in [0, m] {
            if v[j].abs() > 1e-12 {
                return usage(format!(
                    "test function must vanish at the ends, g({}) = {}",
                    grid.node(j),
                    v[j]
                ));
            }
            v[j] = 0.0;
        }
        Ok(Self {
            g: SmoothLoop::new(grid, v, grid.sample(dg), Some(grid.sample(d2g)))?,
        })
    }

    pub fn from_samples(grid: Grid, values: Vec<f64>) -> Result<Self> {
        let g = SmoothLoop::from_samples(grid, values)?;
        if g.start() != 0.0 || g.end() != 0.0 {
            return usage("test function must vanish at the ends");
        }
        Ok(Self { g })
    }

    /// `1 - cos u`.
    pub fn one_minus_cos(grid: Grid) -> Self {
        Self::new(grid, |u| 1.0 - u.cos(), f64::sin, f64::cos).expect("vanishes at the ends")
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { g: self.g.scaled(c) }
    }

    pub fn as_loop(&self) -> &SmoothLoop {
        &self.g
    }

    pub fn values(&self) -> &[f64] {
        self.g.values()
    }

    /// Analytic `g″` where available, else second differences.
    pub fn d2(&self) -> Vec<f64> {
        match self.g.d2() {
            Some(d) => d.to_vec(),
            None => self.g.second_differences(),
        }
    }

    /// `∫ g″ p du` in the form exact for the grid law: with `p(0) = p(2π) = 0`
    /// this is `-Σ Δg Δp/du`, i.e. `g″` by second differences.
    pub fn pair_second_derivative(&self, p: &[f64]) -> f64 {
        -increment_pairing(self.g.grid(), self.g.values(), p)
    }

    pub fn is_zero(&self) -> bool {
        self.g.values().iter().all(|v| *v == 0.0)
    }
}

/// Importance shift for heavy `e^{∫p Re z}` tails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tilt {
    /// Shift when `‖Re z‖₂ > 1`.
    #[default]
    Auto,
    Never,
    Always,
}

const TILT_THRESHOLD: f64 = 1.0;

/// Path-independent setup shared by all estimators.
struct Setup {
    grid: Grid,
    t: f64,
    z: Vec<Complex64>,
    mu: Vec<f64>,
    shift: Option<Vec<f64>>,
}

impl Setup {
    fn new(z: &ComplexLoopArgument, mu: &MuWeight, cfg: &MeasureConfig, tilt: Tilt) -> Result<Self> {
        let grid = z.grid();
        if mu.grid() != grid {
            return usage("z and μ live on different grids");
        }
        let re = z.real_part();
        let norm = quad(&grid, &re.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt();
        let apply = match tilt {
            Tilt::Never => false,
            Tilt::Always => true,
            Tilt::Auto => norm > TILT_THRESHOLD,
        };
        let shift = apply.then(|| moment_tilt(&grid, &re, Sampler::Bridge(0.0), cfg).values().to_vec());
        Ok(Self {
            grid,
            t: cfg.t(),
            z: z.values().to_vec(),
            mu: mu.values().to_vec(),
            shift,
        })
    }

    /// `exp(∫pz - ∫μe^p)`.
    fn integrand(&self, p: &[f64]) -> Complex64 {
        let lin = quad_product_complex(&self.grid, &self.z, p);
        let e: Vec<f64> = self.mu.iter().zip(p).map(|(m, v)| m * v.exp()).collect();
        (lin - quad(&self.grid, &e)).exp()
    }

    /// Draws sample `i` into `p` (shifted if tilted) and returns the
    /// integrand times the Cameron–Martin weight.
    fn draw(&self, cfg: &MeasureConfig, seed: u64, i: u64, p: &mut Path) -> Complex64 {
        Sampler::Bridge(0.0).sample_into(&self.grid, cfg, seed, i, p.values_mut());
        let w = match &self.shift {
            None => 0.0,
            Some(y) => {
                let lw = log_cm_weight_raw(&self.grid, y, p.values(), self.t);
                p.shift_in_place(y, 1.0);
                lw
            }
        };
        let a = self.integrand(p.values());
        if w == 0.0 {
            a
        } else {
            a * w.exp()
        }
    }
}

/// Runs `insert(p, base, out)` over bridge samples, where `base` is the
/// weighted integrand, and scales by the total mass `u_t(0, 2π)`.
fn estimate<F>(
    setup: &Setup,
    cfg: &MeasureConfig,
    params: &McParams,
    ncomp: usize,
    insert: F,
) -> Result<Vec<MCEstimate>>
where
    F: Fn(&[f64], Complex64, &mut [Complex64]) + Sync,
{
    let grid = setup.grid;
    let seed = params.seed;
    let est = run(
        params,
        ncomp,
        || Path::from_parts(grid, vec![0.0; grid.len()], Sampler::Bridge(0.0).kind()),
        |i, p, out| {
            let base = setup.draw(cfg, seed, i, p);
            insert(p.values(), base, out);
            Ok(())
        },
    )?;
    let mass = bridge_mass(0.0, cfg);
    Ok(est.into_iter().map(|e| e.scale(mass)).collect())
}

/// `Γ̂_μ(z)`, total mass included.
pub fn hat_gamma(
    z: &ComplexLoopArgument,
    mu: &MuWeight,
    cfg: &MeasureConfig,
    params: &McParams,
    tilt: Tilt,
) -> Result<MCEstimate> {
    let s = Setup::new(z, mu, cfg, tilt)?;
    Ok(estimate(&s, cfg, params, 1, |_, base, out| out[0] = base)?[0])
}

/// `Γ̂_μ(z + δ_v)`: the factor `e^{p(v)}` inserted at the node `u = v`.
pub fn hat_gamma_delta_shift(
    z: &ComplexLoopArgument,
    mu: &MuWeight,
    v: f64,
    cfg: &MeasureConfig,
    params: &McParams,
    tilt: Tilt,
) -> Result<MCEstimate> {
    let grid = z.grid();
    let Some(node) = grid.node_index(v) else {
        return usage(format!("v = {v} is not a grid node"));
    };
    let s = Setup::new(z, mu, cfg, tilt)?;
    Ok(estimate(&s, cfg, params, 1, |p, base, out| out[0] = base * p[node].exp())?[0])
}

/// `d/dε Γ̂_μ(z + εξ)` at 0: the factor `∫ξp du` inserted.
pub fn variational_derivative(
    z: &ComplexLoopArgument,
    mu: &MuWeight,
    xi: &[f64],
    cfg: &MeasureConfig,
    params: &McParams,
    tilt: Tilt,
) -> Result<MCEstimate> {
    let grid = z.grid();
    grid.check_len(xi.len(), "ξ")?;
    let s = Setup::new(z, mu, cfg, tilt)?;
    Ok(estimate(&s, cfg, params, 1, |p, base, out| {
        let w: Vec<f64> = xi.iter().zip(p).map(|(a, b)| a * b).collect();
        out[0] = base * quad(&grid, &w);
    })?[0])
}

/// Combined residual of the functional equation and its three terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalEquationReport {
    /// `E[(∫gμe^p - ∫gz - (1/t)∫g″p)·exp(∫pz - ∫μe^p)]`, mass included.
    pub combined: MCEstimate,
    /// `∫g(v)μ(v)Γ̂(z + δ_v)dv`.
    pub mu_term: MCEstimate,
    /// `∫g z dv · Γ̂(z)`.
    pub z_term: MCEstimate,
    /// `(1/t)∫g″(v) δΓ̂/δz(v) dv`.
    pub derivative_term: MCEstimate,
    pub reruns: u32,
    pub pass: bool,
}

impl FunctionalEquationReport {
    pub fn to_report(&self) -> CheckReport {
        let rhs = self.z_term.mean + self.derivative_term.mean;
        CheckReport::new(
            "loop_gamma_functional_equation",
            self.mu_term.mean,
            rhs,
            self.combined.stderr,
            self.pass,
        )
        .with("combined_re", self.combined.mean.re)
        .with("combined_im", self.combined.mean.im)
        .with("n", self.combined.n as f64)
        .with("reruns", self.reruns as f64)
    }
}

fn functional_equation_once(
    s: &Setup,
    g: &TestFunction,
    cfg: &MeasureConfig,
    params: &McParams,
) -> Result<FunctionalEquationReport> {
    let grid = s.grid;
    let gz = quad_product_complex(&grid, &s.z, g.values());
    let gmu: Vec<f64> = g.values().iter().zip(&s.mu).map(|(a, b)| a * b).collect();
    let t = s.t;
    let est = estimate(s, cfg, params, 4, |p, base, out| {
        let e: Vec<f64> = gmu.iter().zip(p).map(|(a, v)| a * v.exp()).collect();
        let a = quad(&grid, &e);
        let c = g.pair_second_derivative(p) / t;
        out[0] = base * (a - gz - c);
        out[1] = base * a;
        out[2] = base * gz;
        out[3] = base * c;
    })?;
    let scale = est[1].mean.norm() + est[2].mean.norm() + est[3].mean.norm();
    let pass = within_se(est[0].mean, est[0].stderr, SE_GATE, 0.0, scale);
    Ok(FunctionalEquationReport {
        combined: est[0],
        mu_term: est[1],
        z_term: est[2],
        derivative_term: est[3],
        reruns: 0,
        pass,
    })
}

/// Single-estimator check of
/// `∫gμΓ̂(z+δ_v)dv = ∫gz dv·Γ̂(z) + (1/t)∫g″ δΓ̂/δz(v) dv`; passes at
/// 3 SE, with one rerun at `4N` on failure.
pub fn check_functional_equation(
    z: &ComplexLoopArgument,
    mu: &MuWeight,
    g: &TestFunction,
    cfg: &MeasureConfig,
    params: &McParams,
    tilt: Tilt,
) -> Result<FunctionalEquationReport> {
    if g.as_loop().grid() != &z.grid() {
        return usage("test function lives on a different grid");
    }
    let s = Setup::new(z, mu, cfg, tilt)?;
    let first = functional_equation_once(&s, g, cfg, params)?;
    if first.pass {
        return Ok(first);
    }
    let mut second = functional_equation_once(&s, g, cfg, &params.with_n(params.n * 4))?;
    second.reruns = 1;
    Ok(second)
}

/// `E[(1/t)∫g″x du·F(x)] = -E[d/dε F(x + εg)]` on the bridge pinned at 0,
/// paired on common paths.
pub fn check_ibp_identity(
    f: &dyn crate::mc::Functional,
    g: &TestFunction,
    cfg: &MeasureConfig,
    params: &McParams,
    eps: f64,
) -> Result<CheckReport> {
    let grid = *g.as_loop().grid();
    if g.is_zero() {
        return Ok(CheckReport::new("ibp_identity", 0.0.into(), 0.0.into(), 0.0, true).with("degenerate", 1.0));
    }
    let t = cfg.t();
    let dir = g.values();
    let once = |p: &McParams| -> Result<CheckReport> {
        let est = crate::mc::run_paths(&grid, cfg, Sampler::Bridge(0.0), p, 3, |x, out| {
            let l = f.eval(x, 0.0)? * (g.pair_second_derivative(x.values()) / t);
            let r = -crate::mc::functional::directional_derivative(f, x, 0.0, dir, eps)?;
            out[0] = l;
            out[1] = r;
            out[2] = l - r;
            Ok(())
        })?;
        let scale = est[0].mean.norm() + est[1].mean.norm();
        let pass = within_se(est[2].mean, est[2].stderr, SE_GATE, 0.0, scale);
        Ok(CheckReport::new("ibp_identity", est[0].mean, est[1].mean, est[2].stderr, pass).with("n", p.n as f64))
    };
    crate::mc::checks::gated(params, once)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::functional::ExpLinear;
    use crate::mc::oracle::{covariance_apply, gaussian_moment_oracle_complex};
    use crate::paths::bridge_covariance;
    use std::f64::consts::TAU;

    fn setup(m: usize, t: f64) -> (Grid, MeasureConfig) {
        (Grid::new(m).unwrap(), MeasureConfig::new(t).unwrap())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_argument_gives_total_mass() {
        let (g, cfg) = setup(64, 1.0);
        let e = hat_gamma(
            &ComplexLoopArgument::constant(g, c(0.0, 0.0)),
            &MuWeight::zero(g),
            &cfg,
            &McParams::new(1000, 1),
            Tilt::Auto,
        )
        .unwrap();
        assert_eq!(e.mean.re, 1.0 / TAU);
        assert_eq!(e.stderr, 0.0);
        assert!((e.mean.re - 0.159_155).abs() < 1e-6);
    }

    #[test]
    fn bounded_by_mass_at_zero_argument() {
        let (g, cfg) = setup(64, 1.0);
        let mu = MuWeight::from_fn(g, |u| 1.0 + u.sin().abs()).unwrap();
        let e = hat_gamma(
            &ComplexLoopArgument::constant(g, c(0.0, 0.0)),
            &mu,
            &cfg,
            &McParams::new(4000, 2),
            Tilt::Auto,
        )
        .unwrap();
        assert!(e.mean.norm() <= 1.0 / TAU);
    }

    #[test]
    fn negative_mu_is_domain_error() {
        let g = Grid::new(16).unwrap();
        assert!(matches!(
            MuWeight::from_fn(g, |u| u - 1.0),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn gaussian_case_matches_oracle_with_and_without_tilt() {
        let (g, cfg) = setup(128, 1.0);
        for (z, tilt) in [(0.2, Tilt::Never), (0.6, Tilt::Always), (1.5, Tilt::Auto)] {
            let arg = ComplexLoopArgument::from_fn(g, |u| c(z * (1.0 + 0.5 * u.cos()), 0.0)).unwrap();
            let e = hat_gamma(&arg, &MuWeight::zero(g), &cfg, &McParams::new(20_000, 3), tilt).unwrap();
            let oracle = gaussian_moment_oracle_complex(&g, arg.values(), Sampler::Bridge(0.0), &cfg) / TAU;
            assert!(
                (e.mean - oracle).norm() <= 3.0 * e.stderr + 1e-12 * oracle.norm(),
                "z={z}: {} vs {oracle}",
                e.mean
            );
        }
    }

    #[test]
    fn delta_shift_gaussian_and_pinned_start() {
        let (g, cfg) = setup(64, 1.0);
        let zero = ComplexLoopArgument::constant(g, c(0.0, 0.0));
        let params = McParams::new(40_000, 4);
        let v = g.node(16);
        let e = hat_gamma_delta_shift(&zero, &MuWeight::zero(g), v, &cfg, &params, Tilt::Auto).unwrap();
        let want = (bridge_covariance(v, v, 1.0) / 2.0).exp() / TAU;
        assert!((e.mean.re - want).abs() <= 3.0 * e.stderr, "{} vs {want}", e.mean);

        let mu = MuWeight::constant(g, 0.5).unwrap();
        let z = ComplexLoopArgument::constant(g, c(0.2, 0.3));
        let a = hat_gamma_delta_shift(&z, &mu, 0.0, &cfg, &params, Tilt::Auto).unwrap();
        let b = hat_gamma(&z, &mu, &cfg, &params, Tilt::Auto).unwrap();
        assert_eq!(a.mean, b.mean);
        assert!(matches!(
            hat_gamma_delta_shift(&z, &mu, 0.1, &cfg, &params, Tilt::Auto),
            Err(crate::Error::Usage(_))
        ));
    }

    #[test]
    fn variational_derivative_matches_finite_difference() {
        let (g, cfg) = setup(64, 1.0);
        let z = ComplexLoopArgument::from_fn(g, |u| c(0.2 * u.sin(), 0.4)).unwrap();
        let mu = MuWeight::constant(g, 0.7).unwrap();
        let xi = g.sample(|u| u.cos());
        let params = McParams::new(20_000, 6);
        let d = variational_derivative(&z, &mu, &xi, &cfg, &params, Tilt::Never).unwrap();
        let h = 1e-3;
        let p = hat_gamma(&z.perturbed(&xi, h).unwrap(), &mu, &cfg, &params, Tilt::Never).unwrap();
        let m = hat_gamma(&z.perturbed(&xi, -h).unwrap(), &mu, &cfg, &params, Tilt::Never).unwrap();
        let fd = (p.mean - m.mean) / (2.0 * h);
        // common seeds: the difference is O(h²) pathwise, far below the SE
        assert!((fd - d.mean).norm() <= 3.0 * d.stderr, "{fd} vs {}", d.mean);
        assert!((fd - d.mean).norm() <= 1e-5 * d.mean.norm().max(1e-3));

        let zero = variational_derivative(&z, &mu, &vec![0.0; g.len()], &cfg, &params, Tilt::Never).unwrap();
        assert_eq!(zero.mean, c(0.0, 0.0));
    }

    #[test]
    fn delta_shift_is_minus_mu_derivative() {
        let (g, cfg) = setup(64, 1.0);
        let z = ComplexLoopArgument::constant(g, c(0.3, -0.2));
        let mu = MuWeight::constant(g, 1.0).unwrap();
        let params = McParams::new(10_000, 7);
        let node = 20;
        let h = 1e-4;
        let p = hat_gamma(&z, &mu.with_node_bump(node, h).unwrap(), &cfg, &params, Tilt::Never).unwrap();
        let m = hat_gamma(&z, &mu.with_node_bump(node, -h).unwrap(), &cfg, &params, Tilt::Never).unwrap();
        let fd = (p.mean - m.mean) / (2.0 * h);
        let d = hat_gamma_delta_shift(&z, &mu, g.node(node), &cfg, &params, Tilt::Never).unwrap();
        assert!((fd + d.mean).norm() <= 3.0 * d.stderr);
        assert!((fd + d.mean).norm() <= 1e-6 * d.mean.norm());
    }

    #[test]
    fn mollified_bumps_approach_delta_shift() {
        let (g, cfg) = setup(256, 1.0);
        let z = ComplexLoopArgument::constant(g, c(0.2, 0.1));
        let mu = MuWeight::constant(g, 0.5).unwrap();
        let params = McParams::new(20_000, 8);
        let v = g.node(128);
        let d = hat_gamma_delta_shift(&z, &mu, v, &cfg, &params, Tilt::Never).unwrap();
        let mut errs = Vec::new();
        for sigma in [0.4, 0.2, 0.1] {
            let norm = 1.0 / (sigma * TAU.sqrt());
            let bumped = ComplexLoopArgument::from_fn(g, |u| {
                c(0.2 + norm * (-(u - v).powi(2) / (2.0 * sigma * sigma)).exp(), 0.1)
            })
            .unwrap();
            let e = hat_gamma(&bumped, &mu, &cfg, &params, Tilt::Never).unwrap();
            errs.push((e.mean - d.mean).norm());
        }
        assert!(errs[2] < errs[1] && errs[1] < errs[0], "{errs:?}");
        assert!(errs[2] <= 3.0 * d.stderr + 0.05 * d.mean.norm(), "{errs:?}");
    }

    #[test]
    fn functional_equation_trivial_and_linear() {
        let (g, cfg) = setup(64, 1.0);
        let tf = TestFunction::one_minus_cos(g);
        let zero = ComplexLoopArgument::constant(g, c(0.0, 0.0));
        let r = check_functional_equation(
            &zero,
            &MuWeight::zero(g),
            &tf,
            &cfg,
            &McParams::new(20_000, 9),
            Tilt::Auto,
        )
        .unwrap();
        assert!(r.pass);
        let z = ComplexLoopArgument::constant(g, c(0.3, 0.5));
        let mu = MuWeight::constant(g, 1.0).unwrap();
        let p = McParams::new(5_000, 10);
        let a = check_functional_equation(&z, &mu, &tf, &cfg, &p, Tilt::Auto).unwrap();
        let b = check_functional_equation(&z, &mu, &tf.scaled(2.0), &cfg, &p, Tilt::Auto).unwrap();
        assert!((b.combined.mean - 2.0 * a.combined.mean).norm() <= 1e-12 * (1.0 + a.mu_term.mean.norm()));
    }

    #[test]
    fn functional_equation_pinned_case() {
        let (g, cfg) = setup(256, 1.0);
        let z = ComplexLoopArgument::constant(g, c(0.3, 0.0));
        let mu = MuWeight::constant(g, 1.0).unwrap();
        let r = check_functional_equation(
            &z,
            &mu,
            &TestFunction::one_minus_cos(g),
            &cfg,
            &McParams::new(200_000, 11),
            Tilt::Auto,
        )
        .unwrap();
        assert!(r.pass, "{:?}", r.combined);
    }

    #[test]
    fn test_function_boundary() {
        let g = Grid::new(32).unwrap();
        assert!(matches!(
            TestFunction::new(g, f64::cos, |u| -u.sin(), |u| -u.cos()),
            Err(crate::Error::Usage(_))
        ));
        let s = TestFunction::new(g, f64::sin, f64::cos, |u| -u.sin()).unwrap();
        assert_eq!(s.values()[32], 0.0);
    }

    #[test]
    fn ibp_identity_on_exponentials() {
        let (g, cfg) = setup(128, 0.8);
        let tf = TestFunction::new(g, |u| (u / 2.0).sin().powi(2), |u| 0.5 * u.sin(), |u| 0.5 * u.cos()).unwrap();
        let eta = g.sample(|u| 0.3 * (1.0 + u.cos()));
        let etac: Vec<Complex64> = eta.iter().map(|v| c(*v, 0.0)).collect();
        let f = ExpLinear::new(g, etac.clone()).unwrap();
        let r = check_ibp_identity(&f, &tf, &cfg, &McParams::new(40_000, 12), 1e-4).unwrap();
        assert!(r.pass, "{r:?}");
        // oracle: RHS = -∫ηg·M, with M the Gaussian moment
        let m = gaussian_moment_oracle_complex(&g, &etac, Sampler::Bridge(0.0), &cfg);
        let eg: Vec<f64> = eta.iter().zip(tf.values()).map(|(a, b)| a * b).collect();
        let rhs = -quad(&g, &eg) * m;
        assert!((r.rhs() - rhs).norm() <= 3.0 * r.stderr + 4.0 * r.stderr.max(1e-3 * rhs.norm()));
        // and the LHS oracle: (1/t)⟨wD²g, C wη⟩·M equals the same number exactly
        let cw: Vec<f64> = eta.iter().zip(g.weights()).map(|(a, b)| a * b).collect();
        let y = covariance_apply(&g, Sampler::Bridge(0.0), &cfg, &cw);
        let lhs = tf.pair_second_derivative(&y) / cfg.t() * m;
        assert!((lhs - rhs).norm() < 1e-12 * rhs.norm(), "{lhs} {rhs}");

        let trivial = check_ibp_identity(
            &f,
            &TestFunction::from_samples(g, vec![0.0; g.len()]).unwrap(),
            &cfg,
            &McParams::new(10, 1),
            1e-4,
        )
        .unwrap();
        assert!(trivial.pass);
    }
}
