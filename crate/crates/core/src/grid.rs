//! Uniform partitions of `[0, 2π]` and trapezoid quadrature on them.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};

/// Uniform grid `u_k = 2πk/m`, `k = 0..=m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    m: usize,
}

impl Grid {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return usage(format!("grid needs at least 2 subintervals, got {m}"));
        }
        Ok(Self { m })
    }

    /// Number of subintervals.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of nodes, `m + 1`.
    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn du(&self) -> f64 {
        TAU / self.m as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        if k == self.m {
            TAU
        } else {
            TAU * k as f64 / self.m as f64
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.m).map(move |k| self.node(k))
    }

    /// Trapezoid weight of node `k`.
    pub fn weight(&self, k: usize) -> f64 {
        if k == 0 || k == self.m {
            0.5 * self.du()
        } else {
            self.du()
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..=self.m).map(|k| self.weight(k)).collect()
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes().map(f).collect()
    }

    pub fn sample_complex(&self, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        self.nodes().map(f).collect()
    }

    /// Index of the node at `u`, if `u` is a node up to rounding.
    pub fn node_index(&self, u: f64) -> Option<usize> {
        let x = u / self.du();
        let k = x.round();
        if k < 0.0 || k > self.m as f64 || (x - k).abs() > 1e-9 {
            return None;
        }
        Some(k as usize)
    }

    pub(crate) fn check_len(&self, n: usize, what: &str) -> Result<()> {
        if n != self.len() {
            return usage(format!("{what} has {n} samples but the grid has {} nodes", self.len()));
        }
        Ok(())
    }
}

/// Trapezoid rule over `[0, 2π]`; exact for affine integrands.
pub fn quad(grid: &Grid, values: &[f64]) -> f64 {
    debug_assert_eq!(values.len(), grid.len());
    let m = grid.m();
    let inner: f64 = values[1..m].iter().sum();
    grid.du() * (inner + 0.5 * (values[0] + values[m]))
}

pub fn quad_complex(grid: &Grid, values: &[Complex64]) -> Complex64 {
    debug_assert_eq!(values.len(), grid.len());
    let m = grid.m();
    let inner: Complex64 = values[1..m].iter().sum();
    (inner + (values[0] + values[m]) * 0.5) * grid.du()
}

/// Trapezoid rule applied to the pointwise product `a·b`.
pub fn quad_product(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), grid.len());
    debug_assert_eq!(b.len(), grid.len());
    let m = grid.m();
    let inner: f64 = a[1..m].iter().zip(&b[1..m]).map(|(x, y)| x * y).sum();
    grid.du() * (inner + 0.5 * (a[0] * b[0] + a[m] * b[m]))
}

pub fn quad_product_complex(grid: &Grid, a: &[Complex64], b: &[f64]) -> Complex64 {
    debug_assert_eq!(a.len(), grid.len());
    let m = grid.m();
    let inner: Complex64 = a[1..m].iter().zip(&b[1..m]).map(|(x, y)| x * y).sum();
    (inner + (a[0] * b[0] + a[m] * b[m]) * 0.5) * grid.du()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn four_intervals() {
        let g = Grid::new(4).unwrap();
        let nodes: Vec<f64> = g.nodes().collect();
        let want = [0.0, PI / 2.0, PI, 1.5 * PI, 2.0 * PI];
        for (a, b) in nodes.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(nodes[4], TAU);
    }

    #[test]
    fn two_intervals_step() {
        assert_eq!(Grid::new(2).unwrap().du(), PI);
    }

    #[test]
    fn rejects_single_interval() {
        assert!(matches!(Grid::new(1), Err(crate::Error::Usage(_))));
        assert!(Grid::new(0).is_err());
    }

    #[test]
    fn nodes_increasing_and_step_consistent() {
        for m in [2, 3, 7, 64, 256, 1000] {
            let g = Grid::new(m).unwrap();
            let nodes: Vec<f64> = g.nodes().collect();
            assert!(nodes.windows(2).all(|w| w[1] > w[0]));
            assert!((g.du() * m as f64 - TAU).abs() < 1e-12);
        }
    }

    #[test]
    fn trapezoid_examples() {
        let g = Grid::new(64).unwrap();
        assert!((quad(&g, &g.sample(|_| 1.0)) - TAU).abs() < 1e-14);
        assert!(quad(&g, &g.sample(f64::sin)).abs() < 1e-12);
        let c2 = quad(&g, &g.sample(|u| u.cos().powi(2)));
        assert!((c2 - PI).abs() < 1e-6);
        // affine integrands are integrated exactly
        let aff = quad(&Grid::new(5).unwrap(), &Grid::new(5).unwrap().sample(|u| 3.0 * u - 1.0));
        assert!((aff - (1.5 * TAU * TAU - TAU)).abs() < 1e-12);
    }

    #[test]
    fn node_lookup() {
        let g = Grid::new(8).unwrap();
        assert_eq!(g.node_index(PI), Some(4));
        assert_eq!(g.node_index(0.1), None);
        assert_eq!(g.node_index(TAU), Some(8));
    }
}
