//! Numerical kernel shared by every other module: Student-t distribution,
//! incomplete beta, adaptive quadrature, bracketed root finding, bounded
//! maximization and limit extrapolation.

mod extrapolate;
mod gamma;
mod optimize;
mod quadrature;
mod roots;
mod student_t;

pub use extrapolate::{aitken_tail, Extrapolated};
pub use gamma::{beta_reg, ln_beta, ln_gamma};
pub use optimize::{maximize_1d, refine_max, scan_and_refine, GridScan, OptimResult1D, DEFAULT_GRID};
pub use quadrature::{integrate_adaptive, Integral, QuadratureSpec};
pub use roots::brent_root;
pub use student_t::{student_t_cdf, student_t_pdf, student_t_quantile, StudentT};
