//! Deterministic parallel Monte Carlo reduction.
//!
//! Samples are split into fixed chunks of [`CHUNK`] indices. Each chunk is
//! reduced on its own (compensated mean, then a second pass for the squared
//! deviations) and the chunk moments are merged left to right, so the result
//! does not depend on how chunks were scheduled across threads.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::grid::Grid;
use crate::numeric::{ComplexSum, NeumaierSum};
use crate::paths::{MeasureConfig, Path};
use crate::sampling::Sampler;

pub const CHUNK: u64 = 1024;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "LOOPGAMMA_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McParams {
    pub n: u64,
    pub seed: u64,
    /// `None`: `LOOPGAMMA_THREADS`, else all cores.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl McParams {
    pub fn new(n: u64, seed: u64) -> Self {
        Self { n, seed, workers: None }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = n;
        self
    }
}

/// Monte Carlo result: complex mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    pub mean: Complex64,
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
}

impl MCEstimate {
    /// Exact value carried as an estimate with zero error.
    pub fn exact(mean: Complex64, n: u64, seed: u64) -> Self {
        Self {
            mean,
            stderr: 0.0,
            n,
            seed,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            mean: self.mean * c,
            stderr: self.stderr * c.abs(),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    n: u64,
    mean: Complex64,
    m2: f64,
}

impl Moments {
    fn of(values: &[Complex64]) -> Self {
        let mut s = ComplexSum::default();
        for v in values {
            s.add(*v);
        }
        let mean = s.total() / values.len() as f64;
        let mut m2 = NeumaierSum::default();
        for v in values {
            m2.add((v - mean).norm_sqr());
        }
        Self {
            n: values.len() as u64,
            mean,
            m2: m2.total(),
        }
    }

    // Chan et al. pairwise update.
    fn merge(self, other: Moments) -> Moments {
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let fb = other.n as f64 / n as f64;
        Moments {
            n,
            mean: self.mean + delta * fb,
            m2: self.m2 + other.m2 + delta.norm_sqr() * self.n as f64 * fb,
        }
    }
}

pub fn resolve_workers(requested: Option<usize>) -> Result<usize> {
    if let Some(w) = requested {
        if w == 0 {
            return usage("worker count must be positive");
        }
        return Ok(w);
    }
    if let Ok(v) = std::env::var(THREADS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        };
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn pool(workers: usize) -> Result<Arc<ThreadPool>> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let mut map = POOLS
        .get_or_init(Default::default)
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    if let Some(p) = map.get(&workers) {
        return Ok(p.clone());
    }
    let p = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {workers} workers: {e}")))?;
    let p = Arc::new(p);
    map.insert(workers, p.clone());
    Ok(p)
}

/// Runs `eval` on sample indices `0..n`, each call filling `ncomp` complex
/// outputs, and returns one estimate per output component.
///
/// `init` builds per-chunk scratch space. A failing or non-finite sample
/// aborts the run with [`Error::Eval`] carrying the lowest failing index.
pub fn run<S, I, E>(params: &McParams, ncomp: usize, init: I, eval: E) -> Result<Vec<MCEstimate>>
where
    I: Fn() -> S + Sync,
    E: Fn(u64, &mut S, &mut [Complex64]) -> Result<()> + Sync,
{
    if params.n < 2 {
        return usage(format!("need at least 2 samples, got {}", params.n));
    }
    if ncomp == 0 {
        return usage("need at least one output component");
    }
    let workers = resolve_workers(params.workers)?;
    let n_chunks = params.n.div_ceil(CHUNK);
    let chunk = |c: u64| -> Result<Vec<Moments>> {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(params.n);
        let len = (hi - lo) as usize;
        let mut scratch = init();
        let mut out = vec![Complex64::default(); ncomp];
        let mut cols = vec![Vec::with_capacity(len); ncomp];
        for i in lo..hi {
            eval(i, &mut scratch, &mut out).map_err(|e| match e {
                Error::Eval { .. } => e,
                other => Error::Eval {
                    index: i,
                    reason: other.to_string(),
                },
            })?;
            for (col, v) in cols.iter_mut().zip(&out) {
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::Eval {
                        index: i,
                        reason: format!("non-finite value {v}"),
                    });
                }
                col.push(*v);
            }
        }
        Ok(cols.iter().map(|c| Moments::of(c)).collect())
    };
    let per_chunk: Vec<Result<Vec<Moments>>> = if workers == 1 {
        (0..n_chunks).map(chunk).collect()
    } else {
        pool(workers)?.install(|| (0..n_chunks).into_par_iter().map(chunk).collect())
    };
    let mut acc: Option<Vec<Moments>> = None;
    for r in per_chunk {
        let m = r?;
        acc = Some(match acc {
            None => m,
            Some(a) => a.into_iter().zip(m).map(|(x, y)| x.merge(y)).collect(),
        });
    }
    let acc = acc.expect("at least one chunk");
    Ok(acc
        .into_iter()
        .map(|m| {
            let var = m.m2 / (m.n - 1) as f64;
            MCEstimate {
                mean: m.mean,
                stderr: (var / m.n as f64).sqrt(),
                n: m.n,
                seed: params.seed,
            }
        })
        .collect())
}

/// [`run`] with a sampled path handed to `eval` for every index.
pub fn run_paths<E>(
    grid: &Grid,
    cfg: &MeasureConfig,
    sampler: Sampler,
    params: &McParams,
    ncomp: usize,
    eval: E,
) -> Result<Vec<MCEstimate>>
where
    E: Fn(&Path, &mut [Complex64]) -> Result<()> + Sync,
{
    let seed = params.seed;
    run(
        params,
        ncomp,
        || Path::from_parts(*grid, vec![0.0; grid.len()], sampler.kind()),
        |i, path, out| {
            sampler.sample_into(grid, cfg, seed, i, path.values_mut());
            eval(path, out)
        },
    )
}
