//! Matrix representation of spherical fields.
//!
//! A real zero-mean field `ω = Σ ω^{lm} Y_lm` bandlimited to `l ≤ N−1` maps
//! to `W = Σ i ω^{lm} T^N_lm ∈ su(N)`. The [`QuantizationContext`] holds
//! everything that depends on `N` alone.

mod basis;
mod bracket;
mod grid;
mod laplacian;
mod wigner;

pub use basis::{basis_dense, BandMatrix, QuantizationContext, SphCoeffs};
pub use bracket::{
    bracket_consistency_error, bracket_consistency_error_with, gauss_legendre, poisson_bracket_coeffs, BracketScaling,
};
pub use grid::{evaluate_at, evaluate_on_grid, legendre_normalized, spherical_harmonics, GridField};
pub use laplacian::{laplacian_apply, laplacian_apply_raw, laplacian_solve, laplacian_solve_with, SolvePath};
pub use wigner::{wigner3j, wigner3j_doubled};

use crate::error::Result;

/// Builds the quantization context for `N ≥ 2`.
pub fn build_basis(n: usize) -> Result<QuantizationContext> {
    QuantizationContext::new(n)
}
