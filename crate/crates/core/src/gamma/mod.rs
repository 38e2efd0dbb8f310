//! Classical and regularized Gamma functions.

pub mod lanczos;
pub mod quadrature;
pub mod reg;

pub use lanczos::{gamma_classical, ln_gamma};
pub use reg::{
    check_large_t_limit, check_recurrence, gamma_reg, gamma_reg_prime, laplace_kernel_value, recurrence_report,
    LimitReport, RegGammaParams,
};
