//! Quantized incompressible MHD, `M1 = Δ_N⁻¹ W`, `M2 = Δ_N Θ`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{frobenius_inner, AlgebraElement, CMat};
use crate::error::{Error, Result};
use crate::quantization::{laplacian_apply, laplacian_solve, QuantizationContext};

/// MHD (and Euler, with `Θ ≡ 0`) on `su(N)`.
#[derive(Debug, Clone)]
pub struct MhdModel {
    ctx: Arc<QuantizationContext>,
}

impl MhdModel {
    pub fn new(ctx: Arc<QuantizationContext>) -> Self {
        MhdModel { ctx }
    }

    pub fn ctx(&self) -> &QuantizationContext {
        &self.ctx
    }

    pub fn shared_ctx(&self) -> &Arc<QuantizationContext> {
        &self.ctx
    }

    /// `Δ_N⁻¹ W` on a bare matrix (stage iterates).
    pub fn stream(&self, w: &CMat) -> CMat {
        self.ctx.diag_ops.solve(w)
    }

    /// `(M1, M2)` on bare matrices.
    pub fn m_raw(&self, w: &CMat, theta: &CMat) -> Result<(CMat, CMat)> {
        Ok((self.ctx.diag_ops.solve(w), self.ctx.diag_ops.apply(theta)))
    }
}

/// `(M1, M2) = (Δ_N⁻¹ W, Δ_N Θ)`.
#[allow(non_snake_case)]
pub fn mhd_M(
    w: &AlgebraElement,
    theta: &AlgebraElement,
    ctx: &QuantizationContext,
) -> Result<(AlgebraElement, AlgebraElement)> {
    Ok((laplacian_solve(w, ctx)?, laplacian_apply(theta, ctx)?))
}

/// Real part of `z`, after checking the imaginary part is rounding noise
/// relative to `scale`.
pub(crate) fn real_part(z: Complex64, scale: f64, what: &str) -> Result<f64> {
    if z.im.abs() > 1e-12 * scale.max(1.0) {
        return Err(Error::domain(format!("{what} has imaginary part {:e}", z.im)));
    }
    Ok(z.re)
}

/// `H = ½(tr(W†M1) + tr(Θ†M2))`. Negative for nonzero states since
/// `Δ_N` is negative definite.
pub fn mhd_hamiltonian(w: &AlgebraElement, theta: &AlgebraElement, ctx: &QuantizationContext) -> Result<f64> {
    let (m1, m2) = mhd_M(w, theta, ctx)?;
    mhd_hamiltonian_raw(w.matrix(), theta.matrix(), m1.matrix(), m2.matrix())
}

pub(crate) fn mhd_hamiltonian_raw(w: &CMat, theta: &CMat, m1: &CMat, m2: &CMat) -> Result<f64> {
    let z = (frobenius_inner(w, m1) + frobenius_inner(theta, m2)) * 0.5;
    let scale = w.norm() * m1.norm() + theta.norm() * m2.norm();
    real_part(z, scale, "MHD Hamiltonian")
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::algebra::AlgebraTag;

    fn zero_like(w: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::zeros(AlgebraTag::Su, w.dim())
    }
    use crate::quantization::SphCoeffs;

    #[test]
    fn pure_mode_hamiltonian() {
        let ctx = QuantizationContext::new(6).unwrap();
        let mut c = SphCoeffs::zeros(3);
        let amp = 0.7;
        c.set(3, 0, Complex64::new(amp, 0.0));
        let w = ctx.project(&c).unwrap();
        let h = mhd_hamiltonian(&w, &zero_like(&w), &ctx).unwrap();
        // ½ ⟨W, Δ⁻¹W⟩ = −½ c² / (l(l+1))
        assert!((h + 0.5 * amp * amp / 12.0).abs() < 1e-14);
    }

    #[test]
    fn stream_function_round_trip() {
        let ctx = QuantizationContext::new(7).unwrap();
        let m = CMat::from_fn(7, 7, |i, j| {
            Complex64::new((i as f64 * 1.3 - j as f64).sin(), (i + j) as f64 * 0.05)
        });
        let w = AlgebraElement::projected(AlgebraTag::Su, m);
        let (m1, m2) = mhd_M(&w, &zero_like(&w), &ctx).unwrap();
        let back = laplacian_apply(&m1, &ctx).unwrap();
        assert!((back.matrix() - w.matrix()).norm() < 1e-10);
        assert_eq!(m2.norm(), 0.0);
    }

    #[test]
    fn zero_state_has_zero_energy() {
        let ctx = QuantizationContext::new(4).unwrap();
        let z = AlgebraElement::zeros(AlgebraTag::Su, 4);
        assert_eq!(mhd_hamiltonian(&z, &z, &ctx).unwrap(), 0.0);
    }
}
