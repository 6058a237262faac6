//! Hazeltine's three-field plasma model on `su(N)`.

use std::sync::Arc;

use num_complex::Complex64;

use super::mhd::{mhd_M, real_part, MhdModel};
use crate::algebra::{AlgebraElement, AlgebraTag, CMat};
use crate::error::{Error, Result};
use crate::quantization::QuantizationContext;

/// Hazeltine model with coupling `α`.
#[derive(Debug, Clone)]
pub struct HazeltineModel {
    pub(crate) mhd: MhdModel,
    alpha: f64,
}

impl HazeltineModel {
    pub fn new(ctx: Arc<QuantizationContext>, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::domain("alpha must be finite"));
        }
        Ok(HazeltineModel {
            mhd: MhdModel::new(ctx),
            alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn ctx(&self) -> &QuantizationContext {
        self.mhd.ctx()
    }
}

/// `(M1, M2, M3)` with `M3 = M1 − αχ`.
#[allow(non_snake_case)]
pub fn hazeltine_M(
    w: &AlgebraElement,
    theta: &AlgebraElement,
    chi: &AlgebraElement,
    alpha: f64,
    ctx: &QuantizationContext,
) -> Result<(AlgebraElement, AlgebraElement, AlgebraElement)> {
    let (m1, m2) = mhd_M(w, theta, ctx)?;
    let m3 = AlgebraElement::projected(AlgebraTag::Su, m1.matrix() - chi.matrix() * Complex64::new(alpha, 0.0));
    Ok((m1, m2, m3))
}

/// `H = ½ tr(W M1 + Θ M2 − α χ²)`, without daggers. On `su(N)` this is
/// the negative of the daggered MHD form when `χ = 0`.
pub fn hazeltine_hamiltonian(
    w: &AlgebraElement,
    theta: &AlgebraElement,
    chi: &AlgebraElement,
    alpha: f64,
    ctx: &QuantizationContext,
) -> Result<f64> {
    let (m1, m2) = mhd_M(w, theta, ctx)?;
    hazeltine_hamiltonian_raw(
        w.matrix(),
        theta.matrix(),
        chi.matrix(),
        m1.matrix(),
        m2.matrix(),
        alpha,
    )
}

pub(crate) fn hazeltine_hamiltonian_raw(
    w: &CMat,
    theta: &CMat,
    chi: &CMat,
    m1: &CMat,
    m2: &CMat,
    alpha: f64,
) -> Result<f64> {
    let z = ((w * m1).trace() + (theta * m2).trace() - (chi * chi).trace() * alpha) * 0.5;
    let scale = w.norm() * m1.norm() + theta.norm() * m2.norm() + alpha.abs() * chi.norm_squared();
    real_part(z, scale, "Hazeltine Hamiltonian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::mhd::mhd_hamiltonian;

    fn field(n: usize, seed: f64) -> AlgebraElement {
        let m = CMat::from_fn(n, n, |i, j| {
            Complex64::new(
                (seed + i as f64 * 0.9 - j as f64 * 0.4).sin(),
                (seed * (i + 2 * j) as f64).cos(),
            )
        });
        AlgebraElement::projected(AlgebraTag::Su, m)
    }

    #[test]
    fn alpha_zero_gives_m3_equal_m1() {
        let ctx = QuantizationContext::new(5).unwrap();
        let (w, t, c) = (field(5, 0.1), field(5, 0.7), field(5, 1.9));
        let (m1, _, m3) = hazeltine_M(&w, &t, &c, 0.0, &ctx).unwrap();
        assert!((m1.matrix() - m3.matrix()).norm() < 1e-15);
    }

    #[test]
    fn chi_zero_is_minus_mhd_energy() {
        let ctx = QuantizationContext::new(5).unwrap();
        let (w, t) = (field(5, 0.3), field(5, 1.1));
        let zero = AlgebraElement::zeros(AlgebraTag::Su, 5);
        let h_haz = hazeltine_hamiltonian(&w, &t, &zero, 2.0, &ctx).unwrap();
        let h_mhd = mhd_hamiltonian(&w, &t, &ctx).unwrap();
        assert!((h_haz + h_mhd).abs() < 1e-12 * h_mhd.abs().max(1.0));
    }
}
