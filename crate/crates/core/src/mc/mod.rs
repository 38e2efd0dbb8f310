//! Monte Carlo expectations over Wiener and bridge paths.

pub mod checks;
pub mod engine;
pub mod functional;
pub mod oracle;

use num_complex::Complex64;

use crate::error::{usage, Result};
use crate::grid::Grid;
use crate::paths::{log_cm_weight_raw, MeasureConfig, Path, SmoothLoop};
use crate::sampling::Sampler;

pub use engine::{run, run_paths, MCEstimate, McParams};
pub use functional::{Functional, SharedFunctional};

/// `E[F(x, 0)]` under the sampler's law. Bridge results are
/// probability-normalized; multiply by `bridge_mass` for the measure value.
pub fn expect(
    f: &dyn Functional,
    sampler: Sampler,
    grid: &Grid,
    cfg: &MeasureConfig,
    params: &McParams,
) -> Result<MCEstimate> {
    let est = run_paths(grid, cfg, sampler, params, 1, |x, out| {
        out[0] = f.eval(x, 0.0)?;
        Ok(())
    })?;
    Ok(est[0])
}

/// `E[F(x + y, 0)·w(y, x)]`, an unbiased estimator of `E[F]` under the law
/// translated by the Cameron–Martin shift `y` (for bridges with `y(2π) = 0`
/// the endpoint is unchanged).
pub fn expect_shifted(
    f: &dyn Functional,
    y: &SmoothLoop,
    sampler: Sampler,
    grid: &Grid,
    cfg: &MeasureConfig,
    params: &McParams,
) -> Result<MCEstimate> {
    if y.grid() != grid {
        return usage("shift lives on a different grid");
    }
    y.require_cameron_martin()?;
    let seed = params.seed;
    let t = cfg.t();
    let est = run(
        params,
        1,
        || Path::from_parts(*grid, vec![0.0; grid.len()], sampler.kind()),
        |i, x, out| {
            x.set_kind(sampler.kind());
            sampler.sample_into(grid, cfg, seed, i, x.values_mut());
            let lw = log_cm_weight_raw(grid, y.values(), x.values(), t);
            x.shift_in_place(y.values(), 1.0);
            out[0] = f.eval(x, 0.0)? * lw.exp();
            Ok(())
        },
    )?;
    Ok(est[0])
}

/// Passes when `|diff| ≤ k·stderr + abs_tol`, with a floor of `1e-12·scale`
/// so pathwise-identical estimators are not failed by rounding.
pub(crate) fn within_se(diff: Complex64, stderr: f64, k: f64, abs_tol: f64, scale: f64) -> bool {
    diff.norm() <= k * stderr + abs_tol + 1e-12 * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::functional::{Constant, ExpLinear, NodePower};
    use crate::mc::oracle::{gaussian_moment_oracle, moment_tilt};
    use std::f64::consts::{PI, TAU};

    fn setup(m: usize, t: f64) -> (Grid, MeasureConfig) {
        (Grid::new(m).unwrap(), MeasureConfig::new(t).unwrap())
    }

    #[test]
    fn constant_is_exact() {
        let (g, cfg) = setup(64, 1.0);
        let e = expect(&Constant(1.0.into()), Sampler::Free, &g, &cfg, &McParams::new(4000, 1)).unwrap();
        assert_eq!(e.mean, Complex64::new(1.0, 0.0));
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn midpoint_is_centered() {
        let (g, cfg) = setup(64, 1.0);
        let f = NodePower { node: 32, power: 1 };
        let e = expect(&f, Sampler::Free, &g, &cfg, &McParams::new(100_000, 2)).unwrap();
        assert!(e.mean.norm() <= 3.0 * e.stderr);
        // Var x(π) = π
        let f2 = NodePower { node: 32, power: 2 };
        let e2 = expect(&f2, Sampler::Free, &g, &cfg, &McParams::new(100_000, 2)).unwrap();
        assert!((e2.mean.re - PI).abs() <= 3.0 * e2.stderr);
    }

    #[test]
    fn endpoint_variance_and_covariances() {
        let (g, cfg) = setup(64, 1.0);
        let p = McParams::new(100_000, 11);
        let est = run_paths(&g, &cfg, Sampler::Free, &p, 2, |x, out| {
            let v = x.values();
            out[0] = (v[64] * v[64]).into();
            out[1] = (v[16] * v[48]).into();
            Ok(())
        })
        .unwrap();
        assert!((est[0].mean.re - TAU).abs() <= 3.0 * est[0].stderr);
        assert!((est[1].mean.re - g.node(16)).abs() <= 3.0 * est[1].stderr);

        let est = run_paths(&g, &cfg, Sampler::Bridge(0.0), &p, 2, |x, out| {
            let v = x.values();
            out[0] = (v[32] * v[32]).into();
            out[1] = (v[16] * v[48]).into();
            Ok(())
        })
        .unwrap();
        assert!((est[0].mean.re - PI / 2.0).abs() <= 3.0 * est[0].stderr);
        let (s, u) = (g.node(16), g.node(48));
        let want = s.min(u) - s * u / TAU;
        assert!((est[1].mean.re - want).abs() <= 3.0 * est[1].stderr);
    }

    #[test]
    fn exp_integral_on_bridge_via_tilt() {
        let (g, cfg) = setup(256, 1.0);
        let one = SmoothLoop::from_fn(g, |_| 1.0, |_| 0.0, None);
        let f = ExpLinear::real(&one);
        let s = Sampler::Bridge(0.0);
        let y = moment_tilt(&g, one.values(), s, &cfg);
        let e = expect_shifted(&f, &y, s, &g, &cfg, &McParams::new(20_000, 5)).unwrap();
        let oracle = gaussian_moment_oracle(&one, s, &cfg);
        assert!((e.mean - oracle).norm() <= 3.0 * e.stderr + 1e-9 * oracle.norm());
        // continuum value e^{V/2}, V = (2π)³/12; the grid law differs by O(du²)
        let v = TAU.powi(3) / 12.0;
        let rel = (e.mean.re / (v / 2.0).exp()) - 1.0;
        assert!(rel.abs() < 1e-3, "{rel}");
        assert!((v / 2.0 - 10.335).abs() < 1e-3);
    }
}
