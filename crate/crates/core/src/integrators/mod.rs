//! Implicit-midpoint Lie–Poisson steppers and an explicit baseline.
//!
//! Every structure-preserving step solves its stage equations with the
//! shared Picard solver in [`fixed_point_solve`], then applies an explicit
//! update and projects the result back onto the algebra.

mod fixed_point;
mod hazeltine;
mod isospectral;
mod magnetic;
mod rk4;

pub use fixed_point::{concat_norm, fixed_point_solve};
pub use hazeltine::{hazeltine_kernel, hazeltine_midpoint_step};
pub use isospectral::{isospectral_kernel, isospectral_midpoint_step};
pub use magnetic::{block_embedding_step, magnetic_kernel, magnetic_midpoint_step};
pub use rk4::rk4_baseline_step;

use crate::error::{Error, Result};

/// Step size and stage-solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub h: f64,
    /// Relative tolerance on `‖map(x) − x‖_F / max(1, ‖x‖_F)`.
    pub fp_tol: f64,
    pub fp_max_iters: usize,
    /// Use the explicit RK4 baseline instead of the midpoint schemes.
    pub baseline: bool,
    /// After meeting `fp_tol`, keep iterating until the residual stops
    /// improving, so the stage equations hold to rounding.
    pub polish: bool,
    /// Anderson mixing depth for the stage solve; 0 is plain Picard.
    pub anderson: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            h: 0.1,
            fp_tol: 1e-13,
            fp_max_iters: 100,
            baseline: false,
            polish: true,
            anderson: 0,
        }
    }
}

impl IntegratorConfig {
    pub fn with_h(h: f64) -> Self {
        IntegratorConfig {
            h,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::domain(format!("step size must be positive, got {}", self.h)));
        }
        if !(self.fp_tol > 0.0) {
            return Err(Error::domain(format!("fp_tol must be positive, got {}", self.fp_tol)));
        }
        if self.fp_max_iters == 0 {
            return Err(Error::domain("fp_max_iters must be at least 1"));
        }
        Ok(())
    }
}

/// Outcome of one stage solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageReport {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

impl StageReport {
    /// Report for steps without an implicit stage.
    pub fn explicit() -> Self {
        StageReport {
            iterations: 0,
            residual: 0.0,
            converged: true,
        }
    }
}
