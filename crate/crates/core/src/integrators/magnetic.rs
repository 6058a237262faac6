use num_complex::Complex64;

use super::{fixed_point_solve, isospectral_kernel, IntegratorConfig, StageReport};
use crate::algebra::{commutator, AlgebraElement, CMat};
use crate::error::Result;

/// One magnetic midpoint step on bare matrices `(W, Θ)`, without
/// projection. `m_fns(W̃, Θ̃)` returns `(M̃1, M̃2)`.
pub fn magnetic_kernel<F>(w: &CMat, theta: &CMat, m_fns: F, cfg: &IntegratorConfig) -> Result<(CMat, CMat, StageReport)>
where
    F: Fn(&CMat, &CMat) -> Result<(CMat, CMat)>,
{
    let h = cfg.h;
    let half_h = Complex64::new(h / 2.0, 0.0);
    let quarter_h2 = Complex64::new(h * h / 4.0, 0.0);
    let (stage, report) = fixed_point_solve(
        |x| {
            let (wt, tt) = (&x[0], &x[1]);
            let (m1, m2) = m_fns(wt, tt)?;
            let t_next = theta + commutator(tt, &m1) * half_h + (&m1 * tt * &m1) * quarter_h2;
            let quad = &m1 * wt * &m1 + &m2 * tt * &m1 + &m1 * tt * &m2;
            let w_next = w + (commutator(wt, &m1) + commutator(tt, &m2)) * half_h + quad * quarter_h2;
            Ok(vec![w_next, t_next])
        },
        vec![w.clone(), theta.clone()],
        cfg,
    )?;
    let (wt, tt) = (&stage[0], &stage[1]);
    let (m1, m2) = m_fns(wt, tt)?;
    let hc = Complex64::new(h, 0.0);
    let theta_next = theta + commutator(tt, &m1) * hc;
    let w_next = w + (commutator(wt, &m1) + commutator(tt, &m2)) * hc;
    Ok((w_next, theta_next, report))
}

/// Magnetic midpoint step for `Ẇ = [W, M1] + [Θ, M2]`, `Θ̇ = [Θ, M1]`.
pub fn magnetic_midpoint_step<F>(
    w: &AlgebraElement,
    theta: &AlgebraElement,
    m_fns: F,
    cfg: &IntegratorConfig,
) -> Result<(AlgebraElement, AlgebraElement, StageReport)>
where
    F: Fn(&CMat, &CMat) -> Result<(CMat, CMat)>,
{
    let (wn, tn, report) = magnetic_kernel(w.matrix(), theta.matrix(), m_fns, cfg)?;
    Ok((
        AlgebraElement::projected(w.tag(), wn),
        AlgebraElement::projected(theta.tag(), tn),
        report,
    ))
}

fn lower_block(diag: &CMat, lower: &CMat) -> CMat {
    let n = diag.nrows();
    let mut v = CMat::zeros(2 * n, 2 * n);
    v.view_mut((0, 0), (n, n)).copy_from(diag);
    v.view_mut((n, n), (n, n)).copy_from(diag);
    v.view_mut((n, 0), (n, n)).copy_from(lower);
    v
}

/// The same step computed on the `2N × 2N` embedding
/// `V = [[Θ, 0], [W, Θ]]`, `M = [[M1, 0], [M2, M1]]` with the plain
/// isospectral kernel. `W` and `Θ` are read back from the lower-left and
/// upper-left blocks.
pub fn block_embedding_step<F>(
    w: &AlgebraElement,
    theta: &AlgebraElement,
    m_fns: F,
    cfg: &IntegratorConfig,
) -> Result<(AlgebraElement, AlgebraElement, StageReport)>
where
    F: Fn(&CMat, &CMat) -> Result<(CMat, CMat)>,
{
    let n = w.dim();
    let v = lower_block(theta.matrix(), w.matrix());
    let block_m = |vt: &CMat| -> Result<CMat> {
        let tt = vt.view((0, 0), (n, n)).into_owned();
        let wt = vt.view((n, 0), (n, n)).into_owned();
        let (m1, m2) = m_fns(&wt, &tt)?;
        Ok(lower_block(&m1, &m2))
    };
    let (vn, report) = isospectral_kernel(&v, block_m, cfg)?;
    let tn = vn.view((0, 0), (n, n)).into_owned();
    let wn = vn.view((n, 0), (n, n)).into_owned();
    Ok((
        AlgebraElement::projected(w.tag(), wn),
        AlgebraElement::projected(theta.tag(), tn),
        report,
    ))
}
