//! Wiener-measure path integrals on `[0, 2π]`, representations of the loop
//! `ax+b` group and its central extension, and loop Gamma functionals.
//!
//! Everything is built on a uniform [`Grid`]. Paths are sampled with a
//! counter-based generator so every Monte Carlo estimate is a pure function
//! of `(seed, N)` regardless of the number of worker threads.

// NaN must fail the positivity guards
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fourier;
pub mod gamma;
pub mod grid;
pub mod loop_gamma;
pub mod mc;
pub mod numeric;
pub mod paths;
pub mod rep;
pub mod report;
pub mod sampling;

pub use error::{Error, Result};
pub use gamma::{gamma_classical, gamma_reg, RegGammaParams};
pub use grid::{quad, quad_complex, Grid};
pub use loop_gamma::{hat_gamma, ComplexLoopArgument, MuWeight, TestFunction, Tilt};
pub use mc::{expect, expect_shifted, Functional, MCEstimate, McParams};
pub use num_complex::Complex64;
pub use paths::{
    bridge_mass, cm_weight, heat_kernel, log_cm_weight, stieltjes, MeasureConfig, Path, PathKind, PathRecord,
    SmoothLoop,
};
pub use rep::{apply_rep, GroupElement, RepContext};
pub use report::CheckReport;
pub use sampling::{sample_bridge, sample_wiener, Sampler};
