//! Reproducible path samplers.
//!
//! Every path is a pure function of `(seed, index)`: the generator is a
//! ChaCha8 keystream keyed by `seed` with the sample index as the stream id,
//! and the `k`-th Gaussian increment is the `k`-th normal drawn from that
//! stream. Workers can therefore sample any index range in any order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::grid::Grid;
use crate::paths::{MeasureConfig, Path, PathKind};

/// Generator for sample `index` under `seed`.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Which measure paths are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Sampler {
    Free,
    /// Probability-normalized bridge pinned at `x(2π) = X`.
    Bridge(f64),
}

impl Sampler {
    pub fn kind(&self) -> PathKind {
        match *self {
            Sampler::Free => PathKind::Free,
            Sampler::Bridge(x) => PathKind::Bridge(x),
        }
    }

    /// Fills `out` (length `m + 1`) with the path for `(seed, index)`.
    pub fn sample_into(&self, grid: &Grid, cfg: &MeasureConfig, seed: u64, index: u64, out: &mut [f64]) {
        fill_free(grid, cfg, seed, index, out);
        if let Sampler::Bridge(x) = *self {
            pin_endpoint(grid, out, x);
        }
    }

    pub fn sample(&self, grid: &Grid, cfg: &MeasureConfig, seed: u64, index: u64) -> Path {
        let mut v = vec![0.0; grid.len()];
        self.sample_into(grid, cfg, seed, index, &mut v);
        Path::from_parts(*grid, v, self.kind())
    }
}

fn fill_free(grid: &Grid, cfg: &MeasureConfig, seed: u64, index: u64, out: &mut [f64]) {
    debug_assert_eq!(out.len(), grid.len());
    let mut rng = path_rng(seed, index);
    let sd = (cfg.t() * grid.du()).sqrt();
    out[0] = 0.0;
    let mut acc = 0.0;
    for v in out.iter_mut().skip(1) {
        let z: f64 = StandardNormal.sample(&mut rng);
        acc += sd * z;
        *v = acc;
    }
}

/// Linear endpoint correction `x_k ← x_k - (k/m)(x_m - X)`; exact Gaussian
/// conditioning on the endpoint.
pub(crate) fn pin_endpoint(grid: &Grid, x: &mut [f64], end: f64) {
    let m = grid.m();
    let gap = x[m] - end;
    for (k, v) in x.iter_mut().enumerate().take(m).skip(1) {
        *v -= (k as f64 / m as f64) * gap;
    }
    x[m] = end;
}

/// Free Wiener path for `(seed, index)`.
pub fn sample_wiener(grid: &Grid, cfg: &MeasureConfig, seed: u64, index: u64) -> Path {
    Sampler::Free.sample(grid, cfg, seed, index)
}

/// Bridge pinned at `end`, built from the free path with the same `(seed, index)`.
pub fn sample_bridge(grid: &Grid, cfg: &MeasureConfig, end: f64, seed: u64, index: u64) -> Path {
    Sampler::Bridge(end).sample(grid, cfg, seed, index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_index() {
        let g = Grid::new(32).unwrap();
        let cfg = MeasureConfig::new(1.0).unwrap();
        let a = sample_wiener(&g, &cfg, 7, 123);
        let b = sample_wiener(&g, &cfg, 7, 123);
        assert_eq!(a.values(), b.values());
        let c = sample_wiener(&g, &cfg, 7, 124);
        assert_ne!(a.values(), c.values());
        let d = sample_wiener(&g, &cfg, 8, 123);
        assert_ne!(a.values(), d.values());
    }

    #[test]
    fn bridge_is_pinned_exactly() {
        let g = Grid::new(100).unwrap();
        let cfg = MeasureConfig::new(2.5).unwrap();
        for i in 0..50 {
            for end in [0.0, 1.0, -3.7, 0.1 + 0.2] {
                let p = sample_bridge(&g, &cfg, end, 1, i);
                assert_eq!(p.end(), end);
                assert_eq!(p.values()[0], 0.0);
                assert_eq!(p.kind(), PathKind::Bridge(end));
            }
        }
    }

    #[test]
    fn bridge_shares_increments_with_free_path() {
        let g = Grid::new(16).unwrap();
        let cfg = MeasureConfig::new(1.0).unwrap();
        let w = sample_wiener(&g, &cfg, 3, 9);
        let b = sample_bridge(&g, &cfg, 0.5, 3, 9);
        let gap = w.end() - 0.5;
        for k in 0..16 {
            let want = w.values()[k] - (k as f64 / 16.0) * gap;
            assert!((b.values()[k] - want).abs() < 1e-15);
        }
    }
}
