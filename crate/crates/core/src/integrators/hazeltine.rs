use num_complex::Complex64;

use super::{fixed_point_solve, IntegratorConfig, StageReport};
use crate::algebra::{commutator, AlgebraElement, CMat};
use crate::error::Result;

/// One step of the three-field Hazeltine scheme on bare matrices.
///
/// `m_fns(W̃, Θ̃)` returns `(M̃1, M̃2)`; the scheme forms
/// `M̃3 = M̃1 − αχ̃` itself. All three stage equations are solved as one
/// coupled fixed point.
pub fn hazeltine_kernel<F>(
    w: &CMat,
    theta: &CMat,
    chi: &CMat,
    alpha: f64,
    m_fns: F,
    cfg: &IntegratorConfig,
) -> Result<(CMat, CMat, CMat, StageReport)>
where
    F: Fn(&CMat, &CMat) -> Result<(CMat, CMat)>,
{
    let h = cfg.h;
    let half_h = Complex64::new(h / 2.0, 0.0);
    let quarter_h2 = Complex64::new(h * h / 4.0, 0.0);
    let a = Complex64::new(alpha, 0.0);
    let (stage, report) = fixed_point_solve(
        |x| {
            let (wt, tt, ct) = (&x[0], &x[1], &x[2]);
            let (m1, m2) = m_fns(wt, tt)?;
            let m3 = &m1 - ct * a;
            let t_next = theta + commutator(tt, &m3) * half_h + (&m3 * tt * &m3) * quarter_h2;

            let chi2 = ct * ct;
            let cross = &m2 * tt * &m3 + &m3 * tt * &m2;
            let w_quad = &m1 * wt * &m1 + &cross - (&m1 * &chi2 + &chi2 * &m1) * a + (&chi2 * ct) * (a * a);
            let w_next = w + (commutator(wt, &m1) + commutator(tt, &m2)) * half_h + w_quad * quarter_h2;

            let c_quad = &m3 * ct * &m3 + &cross;
            let c_next = chi + (commutator(ct, &m3) + commutator(tt, &m2)) * half_h + c_quad * quarter_h2;
            Ok(vec![w_next, t_next, c_next])
        },
        vec![w.clone(), theta.clone(), chi.clone()],
        cfg,
    )?;
    let (wt, tt, ct) = (&stage[0], &stage[1], &stage[2]);
    let (m1, m2) = m_fns(wt, tt)?;
    let m3 = &m1 - ct * a;
    let hc = Complex64::new(h, 0.0);
    let theta_next = theta + commutator(tt, &m3) * hc;
    let w_next = w + (commutator(wt, &m1) + commutator(tt, &m2)) * hc;
    let chi_next = chi + (commutator(ct, &m3) + commutator(tt, &m2)) * hc;
    Ok((w_next, theta_next, chi_next, report))
}

/// Hazeltine step on algebra elements, projected after the update.
pub fn hazeltine_midpoint_step<F>(
    w: &AlgebraElement,
    theta: &AlgebraElement,
    chi: &AlgebraElement,
    alpha: f64,
    m_fns: F,
    cfg: &IntegratorConfig,
) -> Result<(AlgebraElement, AlgebraElement, AlgebraElement, StageReport)>
where
    F: Fn(&CMat, &CMat) -> Result<(CMat, CMat)>,
{
    let (wn, tn, cn, report) = hazeltine_kernel(w.matrix(), theta.matrix(), chi.matrix(), alpha, m_fns, cfg)?;
    Ok((
        AlgebraElement::projected(w.tag(), wn),
        AlgebraElement::projected(theta.tag(), tn),
        AlgebraElement::projected(chi.tag(), cn),
        report,
    ))
}
