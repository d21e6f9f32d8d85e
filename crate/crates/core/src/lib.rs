//! Jacobi operators and Gaussian quadrature for weights `e^{-Q(x)}` on the
//! real line, computed row by row from numerically solved Riemann–Hilbert
//! problems.
//!
//! Runnable examples, one per capability:
//!
//! - `hermite_recurrence`: rows of `e^{-x²}` against `b_n = n/2`
//! - `gauss_quadrature`: rules for `e^{-x⁸}` against a reference integral
//! - `equilibrium_measure`: support, density and `ℓ` for `V = x⁴`
//! - `rhp_solver`: a triangular jump on a segment
//! - `contour_deformation`: the truncated contour behind one row
//! - `entire_weights`: scaling and rows for `e^{-cosh x}` and `e^{-x²-sin x}`
//! - `stieltjes_baseline`: accuracy of the discretized Stieltjes procedure
//! - `chebyshev_tools`: interpolation and Clenshaw–Curtis quadrature
//! - `command_line`: the CLI driven in-process

// `!(x > 0.0)` rejects NaN on purpose; index loops mirror the formulas
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cauchy;
pub mod chebyshev;
pub mod cli;
pub mod contours;
pub mod equilibrium;
pub mod error;
pub mod jacobi;
pub mod mat2;
pub mod opdeform;
pub mod quad;
pub mod rhp;
pub mod scaling;

pub use error::{Error, Result};
