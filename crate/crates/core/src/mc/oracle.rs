//! Closed-form Gaussian moments of the discretized Wiener and bridge laws.
//!
//! With trapezoid weights `c_k = w_k·η_k`, `⟨η, x⟩ = Σ c_k x_k` is Gaussian
//! with mean `Σ c_k m_k` and variance `Σ c_j c_k C(u_j, u_k)`, so
//! `E[exp⟨η, x⟩]` is exact for the sampled law, not only in the continuum.

use num_complex::Complex64;

use crate::grid::Grid;
use crate::paths::{MeasureConfig, SmoothLoop};
use crate::sampling::Sampler;

/// Node means: 0 for the free path, `X·k/m` for a bridge.
pub fn node_means(grid: &Grid, sampler: Sampler) -> Vec<f64> {
    let m = grid.m() as f64;
    match sampler {
        Sampler::Free => vec![0.0; grid.len()],
        Sampler::Bridge(x) => (0..grid.len()).map(|k| x * k as f64 / m).collect(),
    }
}

/// `y_k = Σ_j C(u_k, u_j)·c_j` in `O(m)`.
pub fn covariance_apply(grid: &Grid, sampler: Sampler, cfg: &MeasureConfig, c: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let u: Vec<f64> = grid.nodes().collect();
    // tail[k] = Σ_{j>k} c_j
    let mut tail = vec![0.0; n];
    for k in (0..n - 1).rev() {
        tail[k] = tail[k + 1] + c[k + 1];
    }
    let mut head = 0.0;
    let mut y = vec![0.0; n];
    for k in 0..n {
        head += u[k] * c[k];
        y[k] = head + u[k] * tail[k];
    }
    if let Sampler::Bridge(_) = sampler {
        let first: f64 = u.iter().zip(c).map(|(a, b)| a * b).sum();
        for k in 0..n {
            y[k] -= u[k] * first / grid.node(grid.m());
        }
        y[n - 1] = 0.0;
    }
    y[0] = 0.0;
    for v in &mut y {
        *v *= cfg.t();
    }
    y
}

/// `log E[exp(Σ_k w_k η_k x_k)]` for complex `η`.
pub fn log_gaussian_moment(grid: &Grid, eta: &[Complex64], sampler: Sampler, cfg: &MeasureConfig) -> Complex64 {
    let w = grid.weights();
    let cre: Vec<f64> = eta.iter().zip(&w).map(|(e, w)| e.re * w).collect();
    let cim: Vec<f64> = eta.iter().zip(&w).map(|(e, w)| e.im * w).collect();
    let yre = covariance_apply(grid, sampler, cfg, &cre);
    let yim = covariance_apply(grid, sampler, cfg, &cim);
    let means = node_means(grid, sampler);
    let mut lin = Complex64::default();
    let mut quadf = Complex64::default();
    for k in 0..grid.len() {
        let ck = Complex64::new(cre[k], cim[k]);
        lin += ck * means[k];
        quadf += ck * Complex64::new(yre[k], yim[k]);
    }
    lin + 0.5 * quadf
}

pub fn gaussian_moment_oracle_complex(
    grid: &Grid,
    eta: &[Complex64],
    sampler: Sampler,
    cfg: &MeasureConfig,
) -> Complex64 {
    log_gaussian_moment(grid, eta, sampler, cfg).exp()
}

/// `E[exp⟨η, x⟩]` for a real profile `η`.
pub fn gaussian_moment_oracle(eta: &SmoothLoop, sampler: Sampler, cfg: &MeasureConfig) -> Complex64 {
    let e: Vec<Complex64> = eta.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    gaussian_moment_oracle_complex(eta.grid(), &e, sampler, cfg)
}

/// Mean shift of the exponentially tilted law: sampling `x + y` with the
/// Cameron–Martin weight makes `exp⟨η, x⟩` a zero-variance integrand.
pub fn moment_tilt(grid: &Grid, eta: &[f64], sampler: Sampler, cfg: &MeasureConfig) -> SmoothLoop {
    let c: Vec<f64> = eta.iter().zip(grid.weights()).map(|(e, w)| e * w).collect();
    let y = covariance_apply(grid, sampler, cfg, &c);
    let d1 = vec![0.0; grid.len()];
    SmoothLoop::new(*grid, y, d1, None).expect("tilt samples are finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{bridge_covariance, free_covariance};
    use std::f64::consts::TAU;

    fn brute(grid: &Grid, eta: &[f64], sampler: Sampler, t: f64) -> f64 {
        let u: Vec<f64> = grid.nodes().collect();
        let w = grid.weights();
        let mut q = 0.0;
        for j in 0..grid.len() {
            for k in 0..grid.len() {
                let c = match sampler {
                    Sampler::Free => free_covariance(u[j], u[k], t),
                    Sampler::Bridge(_) => bridge_covariance(u[j], u[k], t),
                };
                q += w[j] * w[k] * eta[j] * eta[k] * c;
            }
        }
        0.5 * q
    }

    #[test]
    fn linear_time_form_matches_double_sum() {
        let g = Grid::new(40).unwrap();
        let cfg = MeasureConfig::new(1.7).unwrap();
        let eta = g.sample(|u| (u - 1.0).cos() + 0.3);
        let ec: Vec<Complex64> = eta.iter().map(|&v| v.into()).collect();
        for s in [Sampler::Free, Sampler::Bridge(0.0)] {
            let got = log_gaussian_moment(&g, &ec, s, &cfg).re;
            let want = brute(&g, &eta, s, 1.7);
            assert!((got - want).abs() < 1e-10 * want.abs().max(1.0), "{s:?}");
        }
    }

    #[test]
    fn unit_profile_closed_forms() {
        // trapezoid is exact for the piecewise-linear-in-each-argument kernels
        // only in the limit, so use a fine grid and a relative gate
        let g = Grid::new(4096).unwrap();
        let cfg = MeasureConfig::new(1.0).unwrap();
        let one = SmoothLoop::from_fn(g, |_| 1.0, |_| 0.0, None);
        let v = TAU.powi(3) / 12.0;
        let b = log_gaussian_moment(&g, &[Complex64::new(1.0, 0.0); 4097], Sampler::Bridge(0.0), &cfg);
        assert!((b.re - v / 2.0).abs() < 1e-5);
        let f = gaussian_moment_oracle(&one, Sampler::Free, &cfg).ln();
        assert!((f.re - TAU.powi(3) / 6.0).abs() < 1e-5);
        assert_eq!(
            gaussian_moment_oracle(&SmoothLoop::zero(g), Sampler::Free, &cfg),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn bridge_mean_enters_linearly() {
        let g = Grid::new(32).unwrap();
        let cfg = MeasureConfig::new(1.0).unwrap();
        let eta = vec![Complex64::new(0.0, 0.0); 33];
        assert_eq!(
            log_gaussian_moment(&g, &eta, Sampler::Bridge(2.0), &cfg),
            Complex64::default()
        );
        let mut e = eta.clone();
        e[32] = Complex64::new(1.0, 0.0);
        // only the end node: Σ w_k η_k m_k = (du/2)·X, variance 0
        let got = log_gaussian_moment(&g, &e, Sampler::Bridge(2.0), &cfg);
        assert!((got.re - g.du()).abs() < 1e-14);
    }
}
