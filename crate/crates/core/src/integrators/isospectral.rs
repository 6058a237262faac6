use num_complex::Complex64;

use super::{fixed_point_solve, IntegratorConfig, StageReport};
use crate::algebra::{commutator, AlgebraElement, CMat};
use crate::error::Result;

/// One isospectral midpoint step on a bare matrix, without projection.
///
/// Solves `Ṽ = V + (h/2)[Ṽ, M̃] + (h²/4) M̃ Ṽ M̃` with `M̃ = M(Ṽ)` and
/// returns `V + h[Ṽ, M̃]`.
pub fn isospectral_kernel<F>(v: &CMat, m_fn: F, cfg: &IntegratorConfig) -> Result<(CMat, StageReport)>
where
    F: Fn(&CMat) -> Result<CMat>,
{
    let h = cfg.h;
    let half_h = Complex64::new(h / 2.0, 0.0);
    let quarter_h2 = Complex64::new(h * h / 4.0, 0.0);
    let (stage, report) = fixed_point_solve(
        |x| {
            let vt = &x[0];
            let m = m_fn(vt)?;
            let next = v + commutator(vt, &m) * half_h + (&m * vt * &m) * quarter_h2;
            Ok(vec![next])
        },
        vec![v.clone()],
        cfg,
    )?;
    let vt = &stage[0];
    let m = m_fn(vt)?;
    Ok((v + commutator(vt, &m) * Complex64::new(h, 0.0), report))
}

/// Isospectral midpoint step for `V̇ = [V, M(V)]`, projected back onto the
/// algebra of `v`.
pub fn isospectral_midpoint_step<F>(
    v: &AlgebraElement,
    m_fn: F,
    cfg: &IntegratorConfig,
) -> Result<(AlgebraElement, StageReport)>
where
    F: Fn(&CMat) -> Result<CMat>,
{
    let (next, report) = isospectral_kernel(v.matrix(), m_fn, cfg)?;
    Ok((AlgebraElement::projected(v.tag(), next), report))
}
