//! Laplace-transform pictures of the representations: the finite
//! dimensional `ax+b` group on the line, the base-coordinate kernel of the
//! loop representation, and the Fourier–Wiener transform.

pub mod base_kernel;
pub mod line;
pub mod wiener;

pub use base_kernel::{check_base_kernel, sector_constant, BaseKernelReport};
pub use line::{
    bilateral_laplace, check_finite_kernel, inverse_laplace, laplace_on_line, rep_finite, round_trip,
    FiniteKernelReport, LaplaceLine, LineFunction,
};
pub use wiener::{fourier_wiener_check, mathcal_f_eval, mathcal_f_one, FourierWienerReport};
