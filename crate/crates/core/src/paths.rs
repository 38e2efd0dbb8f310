//! Sampled paths, smooth loops, and the pathwise integrals used against them.
//!
//! Conventions: increments of a Wiener path with variance parameter `t` are
//! `N(0, t·du)`, so the one-step transition density is
//! `(2πts)^{-1/2} exp(-x²/(2ts))`. Stochastic integrals `∫ y' dx` use
//! left-endpoint sums with `y'` realized by increment slopes `Δy/du`; with that
//! choice the discrete Cameron–Martin identity holds exactly, not just to
//! `O(du)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};
use crate::grid::{quad, quad_product, Grid};
use crate::numeric::NeumaierSum;

/// Variance parameter of the Wiener measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    t: f64,
}

impl MeasureConfig {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return usage(format!("variance parameter must be positive, got {t}"));
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Same measure with variance `factor·t`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.t * factor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PathKind {
    Free,
    /// Pinned at `x(2π) = X`.
    Bridge(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    grid: Grid,
    values: Vec<f64>,
    kind: PathKind,
}

impl Path {
    pub fn new(grid: Grid, values: Vec<f64>, kind: PathKind) -> Result<Self> {
        grid.check_len(values.len(), "path")?;
        if values[0] != 0.0 {
            return usage("paths must start at x(0) = 0");
        }
        if let PathKind::Bridge(x) = kind {
            if values[grid.m()] != x {
                return usage(format!("bridge path must end at {x}, ends at {}", values[grid.m()]));
            }
        }
        Ok(Self { grid, values, kind })
    }

    /// Free path from a closure; the value at 0 is forced to 0.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let mut values = grid.sample(f);
        values[0] = 0.0;
        Self {
            grid,
            values,
            kind: PathKind::Free,
        }
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>, kind: PathKind) -> Self {
        Self { grid, values, kind }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub(crate) fn set_kind(&mut self, kind: PathKind) {
        self.kind = kind;
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    pub fn end(&self) -> f64 {
        self.values[self.grid.m()]
    }

    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    /// `x + y`. A bridge stays a bridge, pinned at `X + y(2π)`.
    pub fn shifted(&self, y: &[f64]) -> Result<Path> {
        self.grid.check_len(y.len(), "shift")?;
        if y[0] != 0.0 {
            return usage("shift must vanish at u = 0");
        }
        let mut out = self.clone();
        out.shift_in_place(y, 1.0);
        Ok(out)
    }

    /// `x + c·y` without validation; `y[0]` must be 0.
    pub(crate) fn shift_in_place(&mut self, y: &[f64], c: f64) {
        for (v, d) in self.values.iter_mut().zip(y) {
            *v += c * d;
        }
        self.values[0] = 0.0;
        if let PathKind::Bridge(_) = self.kind {
            self.kind = PathKind::Bridge(self.values[self.grid.m()]);
        }
    }

    pub fn to_record(&self, cfg: &MeasureConfig) -> PathRecord {
        PathRecord {
            grid_m: self.grid.m(),
            t: cfg.t(),
            values: self.values.clone(),
        }
    }

    /// Rebuilds a path from its JSON record; a record is a bridge when `bridge` is set.
    pub fn from_record(rec: &PathRecord, bridge: bool) -> Result<(Path, MeasureConfig)> {
        let grid = Grid::new(rec.grid_m)?;
        let cfg = MeasureConfig::new(rec.t)?;
        grid.check_len(rec.values.len(), "path record")?;
        let kind = if bridge {
            PathKind::Bridge(rec.values[grid.m()])
        } else {
            PathKind::Free
        };
        Ok((Path::new(grid, rec.values.clone(), kind)?, cfg))
    }
}

/// JSON form shared by paths and loops: `{grid_m, t, values}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub grid_m: usize,
    pub t: f64,
    pub values: Vec<f64>,
}

/// A deterministic function on the grid together with its derivatives.
///
/// `d1`/`d2` are the analytic derivatives when the loop was built from
/// closures; loops built from bare samples get centred finite differences.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothLoop {
    grid: Grid,
    values: Vec<f64>,
    d1: Vec<f64>,
    d2: Option<Vec<f64>>,
}

impl SmoothLoop {
    pub fn new(grid: Grid, values: Vec<f64>, d1: Vec<f64>, d2: Option<Vec<f64>>) -> Result<Self> {
        grid.check_len(values.len(), "loop values")?;
        grid.check_len(d1.len(), "loop derivative")?;
        if let Some(d2) = &d2 {
            grid.check_len(d2.len(), "loop second derivative")?;
        }
        if values.iter().chain(&d1).any(|v| !v.is_finite()) {
            return usage("loop samples must be finite");
        }
        Ok(Self { grid, values, d1, d2 })
    }

    pub fn from_fn(
        grid: Grid,
        f: impl Fn(f64) -> f64,
        df: impl Fn(f64) -> f64,
        d2f: Option<&dyn Fn(f64) -> f64>,
    ) -> Self {
        Self {
            grid,
            values: grid.sample(f),
            d1: grid.sample(df),
            d2: d2f.map(|g| grid.sample(g)),
        }
    }

    /// Like [`SmoothLoop::from_fn`] for a 2π-periodic function: the endpoint
    /// samples are made bitwise equal so the loop condition holds exactly.
    pub fn periodic(
        grid: Grid,
        f: impl Fn(f64) -> f64,
        df: impl Fn(f64) -> f64,
        d2f: Option<&dyn Fn(f64) -> f64>,
    ) -> Self {
        let mut l = Self::from_fn(grid, f, df, d2f);
        let m = grid.m();
        l.values[m] = l.values[0];
        l.d1[m] = l.d1[0];
        if let Some(d2) = &mut l.d2 {
            d2[m] = d2[0];
        }
        l
    }

    /// From samples only; derivatives by finite differences.
    pub fn from_samples(grid: Grid, values: Vec<f64>) -> Result<Self> {
        grid.check_len(values.len(), "loop values")?;
        let d1 = finite_difference(&grid, &values);
        let d2 = Some(finite_difference(&grid, &d1));
        Self::new(grid, values, d1, d2)
    }

    pub fn zero(grid: Grid) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![0.0; n],
            d1: vec![0.0; n],
            d2: Some(vec![0.0; n]),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn d1(&self) -> &[f64] {
        &self.d1
    }

    pub fn d2(&self) -> Option<&[f64]> {
        self.d2.as_deref()
    }

    pub fn start(&self) -> f64 {
        self.values[0]
    }

    pub fn end(&self) -> f64 {
        self.values[self.grid.m()]
    }

    pub fn is_cameron_martin(&self) -> bool {
        self.values[0] == 0.0
    }

    pub fn is_loop(&self) -> bool {
        let (a, b) = (self.start(), self.end());
        (a - b).abs() <= 1e-12 * (1.0 + a.abs())
    }

    pub fn require_cameron_martin(&self) -> Result<()> {
        if !self.is_cameron_martin() {
            return usage(format!(
                "Cameron–Martin shift must vanish at 0, starts at {}",
                self.start()
            ));
        }
        Ok(())
    }

    pub fn require_loop(&self) -> Result<()> {
        if !self.is_loop() {
            return usage(format!(
                "not a loop: value {} at 0 but {} at 2π",
                self.start(),
                self.end()
            ));
        }
        Ok(())
    }

    /// Increment slopes `(y_k - y_{k-1})/du`, `k = 1..=m`.
    pub fn slopes(&self) -> Vec<f64> {
        increment_slopes(&self.grid, &self.values)
    }

    /// `∫ y'² du` with `y'` realized by increment slopes.
    pub fn energy(&self) -> f64 {
        let du = self.grid.du();
        let mut s = NeumaierSum::default();
        for w in self.values.windows(2) {
            let d = w[1] - w[0];
            s.add(d * d);
        }
        s.total() / du
    }

    /// Second differences `(y_{k+1} - 2y_k + y_{k-1})/du²` at interior
    /// nodes; the end nodes use the periodic wrap (meaningful for loops).
    pub fn second_differences(&self) -> Vec<f64> {
        let m = self.grid.m();
        let h2 = self.grid.du() * self.grid.du();
        let v = &self.values;
        let mut out = vec![0.0; m + 1];
        for k in 1..m {
            out[k] = (v[k + 1] - 2.0 * v[k] + v[k - 1]) / h2;
        }
        let wrap = (v[1] - 2.0 * v[0] + v[m - 1]) / h2;
        out[0] = wrap;
        out[m] = wrap;
        out
    }

    /// The based part `y - y(0)`.
    pub fn based(&self) -> SmoothLoop {
        let y0 = self.values[0];
        let mut out = self.clone();
        for v in &mut out.values {
            *v -= y0;
        }
        out.values[0] = 0.0;
        out
    }

    pub fn scaled(&self, c: f64) -> SmoothLoop {
        SmoothLoop {
            grid: self.grid,
            values: self.values.iter().map(|v| c * v).collect(),
            d1: self.d1.iter().map(|v| c * v).collect(),
            d2: self.d2.as_ref().map(|d| d.iter().map(|v| c * v).collect()),
        }
    }

    pub fn add(&self, other: &SmoothLoop) -> Result<SmoothLoop> {
        if self.grid != other.grid {
            return usage("loops live on different grids");
        }
        let zip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        Ok(SmoothLoop {
            grid: self.grid,
            values: zip(&self.values, &other.values),
            d1: zip(&self.d1, &other.d1),
            d2: match (&self.d2, &other.d2) {
                (Some(a), Some(b)) => Some(zip(a, b)),
                _ => None,
            },
        })
    }

    pub fn to_record(&self, cfg: &MeasureConfig) -> PathRecord {
        PathRecord {
            grid_m: self.grid.m(),
            t: cfg.t(),
            values: self.values.clone(),
        }
    }
}

fn finite_difference(grid: &Grid, v: &[f64]) -> Vec<f64> {
    let m = grid.m();
    let du = grid.du();
    let mut d = vec![0.0; m + 1];
    for k in 1..m {
        d[k] = (v[k + 1] - v[k - 1]) / (2.0 * du);
    }
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * du);
    d[m] = (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * du);
    d
}

pub(crate) fn increment_slopes(grid: &Grid, v: &[f64]) -> Vec<f64> {
    let du = grid.du();
    v.windows(2).map(|w| (w[1] - w[0]) / du).collect()
}

/// Gaussian transition density with variance `t·s`.
pub fn heat_kernel(x: f64, s: f64, t: f64) -> Result<f64> {
    if !(s > 0.0) || !(t > 0.0) {
        return usage(format!("heat kernel needs s > 0 and t > 0, got s={s}, t={t}"));
    }
    let v = t * s;
    Ok((-x * x / (2.0 * v)).exp() / (TAU * v).sqrt())
}

/// Total mass of the conditional measure pinned at `X`: `u_t(X, 2π)`.
pub fn bridge_mass(x_end: f64, cfg: &MeasureConfig) -> f64 {
    let v = cfg.t() * TAU;
    (-x_end * x_end / (2.0 * v)).exp() / (TAU * v).sqrt()
}

/// Left-endpoint Stieltjes sum `Σ d1[k-1]·(x_k - x_{k-1})`.
pub fn stieltjes(d1: &[f64], path: &Path) -> Result<f64> {
    path.grid().check_len(d1.len(), "integrand")?;
    Ok(stieltjes_raw(d1, path.values()))
}

pub(crate) fn stieltjes_raw(d1: &[f64], x: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 1..x.len() {
        s += d1[k - 1] * (x[k] - x[k - 1]);
    }
    s
}

/// `∫ y' dx` with `y'` given by the increment slopes of `y`.
pub fn stieltjes_increments(y: &[f64], path: &Path) -> Result<f64> {
    path.grid().check_len(y.len(), "integrand")?;
    Ok(increment_pairing(path.grid(), y, path.values()))
}

/// `Σ (Δy_k/du)·Δx_k`; symmetric in `y` and `x`.
pub(crate) fn increment_pairing(grid: &Grid, y: &[f64], x: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 1..x.len() {
        s += (y[k] - y[k - 1]) * (x[k] - x[k - 1]);
    }
    s / grid.du()
}

/// `∫ α dx` for a smooth `α`, via integration by parts:
/// `α(2π)x(2π) - α(0)x(0) - ∫ α'(u) x(u) du`, with the analytic `α'`.
pub fn wiener_integral(alpha: &SmoothLoop, x: &[f64]) -> f64 {
    let m = alpha.grid().m();
    alpha.values()[m] * x[m] - alpha.values()[0] * x[0] - quad_product(alpha.grid(), alpha.d1(), x)
}

/// `log` of the Cameron–Martin weight
/// `exp(-(1/t)∫ y' dx - (1/2t)∫ y'² du)`.
pub fn log_cm_weight(y: &SmoothLoop, path: &Path, cfg: &MeasureConfig) -> Result<f64> {
    if y.grid() != path.grid() {
        return usage("shift and path live on different grids");
    }
    y.require_cameron_martin()?;
    Ok(log_cm_weight_raw(y.grid(), y.values(), path.values(), cfg.t()))
}

pub(crate) fn log_cm_weight_raw(grid: &Grid, y: &[f64], x: &[f64], t: f64) -> f64 {
    let du = grid.du();
    let mut cross = 0.0;
    let mut energy = 0.0;
    for k in 1..x.len() {
        let dy = y[k] - y[k - 1];
        cross += dy * (x[k] - x[k - 1]);
        energy += dy * dy;
    }
    -(cross / du) / t - (energy / du) / (2.0 * t)
}

pub fn cm_weight(y: &SmoothLoop, path: &Path, cfg: &MeasureConfig) -> Result<f64> {
    log_cm_weight(y, path, cfg).map(f64::exp)
}

/// Log-density of the increments of `path` under the free measure.
pub fn log_density(path: &Path, cfg: &MeasureConfig) -> f64 {
    let grid = path.grid();
    let v = cfg.t() * grid.du();
    let mut q = NeumaierSum::default();
    for d in path.increments() {
        q.add(d * d);
    }
    -q.total() / (2.0 * v) - 0.5 * grid.m() as f64 * (TAU * v).ln()
}

/// Covariance of the free path at nodes: `t·min(s, u)`.
pub fn free_covariance(s: f64, u: f64, t: f64) -> f64 {
    t * s.min(u)
}

/// Covariance of the bridge at nodes: `t·(min(s, u) - su/2π)`.
pub fn bridge_covariance(s: f64, u: f64, t: f64) -> f64 {
    t * (s.min(u) - s * u / (2.0 * PI))
}

/// Trapezoid integral of the samples of a loop.
pub fn integral(l: &SmoothLoop) -> f64 {
    quad(l.grid(), l.values())
}
