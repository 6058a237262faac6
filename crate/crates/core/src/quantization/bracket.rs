//! Consistency between the Poisson bracket on the sphere and the rescaled
//! matrix commutator.
//!
//! `{f, g}` is evaluated pseudo-spectrally: gradients of both fields are
//! sampled on a Gauss–Legendre × uniform grid, combined pointwise, and the
//! product is transformed back to spherical-harmonic coefficients by exact
//! quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::basis::{lm_index, QuantizationContext, SphCoeffs};
use super::grid::spherical_harmonics;
use crate::algebra::commutator;
use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]`, by Newton iteration on
/// the Legendre three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Values, `∂ϑ` and `∂φ` of a real expansion at one point, given the
/// harmonics table from [`spherical_harmonics`].
fn value_and_gradient(c: &SphCoeffs, y: &[Complex64], phi: f64) -> (f64, f64, f64) {
    let i = Complex64::new(0.0, 1.0);
    let e_minus = Complex64::from_polar(1.0, -phi);
    let e_plus = Complex64::from_polar(1.0, phi);
    let (mut v, mut dt, mut dp) = (0.0, 0.0, 0.0);
    for (l, m, w) in c.iter() {
        let ylm = y[lm_index(l, m)];
        v += (w * ylm).re;
        dp += (w * i * m as f64 * ylm).re;
        let (lf, mf) = (l as f64, m as f64);
        let mut d = Complex64::new(0.0, 0.0);
        if m < l as i64 {
            d += e_minus * y[lm_index(l, m + 1)] * (0.5 * ((lf - mf) * (lf + mf + 1.0)).sqrt());
        }
        if m > -(l as i64) {
            d -= e_plus * y[lm_index(l, m - 1)] * (0.5 * ((lf + mf) * (lf - mf + 1.0)).sqrt());
        }
        dt += (w * d).re;
    }
    (v, dt, dp)
}

/// Spherical-harmonic coefficients of `{f, g} = (∂ϑf ∂φg − ∂φf ∂ϑg)/sin ϑ`
/// up to degree `l_out`.
pub fn poisson_bracket_coeffs(f: &SphCoeffs, g: &SphCoeffs, l_out: usize) -> SphCoeffs {
    let l_in = f.l_max().max(g.l_max());
    // The integrand has degree at most l_out + f.l_max + g.l_max; pad for safety.
    let degree = l_out + f.l_max() + g.l_max() + 2;
    let n_lat = degree / 2 + 2;
    let n_lon = degree + 2;
    let (nodes, weights) = gauss_legendre(n_lat);
    let l_table = l_in.max(l_out);
    let mut out = SphCoeffs::zeros(l_out);
    let mut acc = vec![Complex64::new(0.0, 0.0); (l_out + 1) * (l_out + 1) - 1];
    let d_phi = 2.0 * PI / n_lon as f64;
    for (&x, &wq) in nodes.iter().zip(&weights) {
        let theta = x.acos();
        let sin_t = theta.sin();
        for b in 0..n_lon {
            let phi = b as f64 * d_phi;
            let y = spherical_harmonics(l_table, theta, phi);
            let (_, ft, fp) = value_and_gradient(f, &y, phi);
            let (_, gt, gp) = value_and_gradient(g, &y, phi);
            let bracket = (ft * gp - fp * gt) / sin_t;
            let weight = wq * d_phi * bracket;
            for l in 1..=l_out {
                for m in 0..=l as i64 {
                    acc[lm_index(l, m)] += y[lm_index(l, m)].conj() * weight;
                }
            }
        }
    }
    for l in 1..=l_out {
        for m in 0..=l as i64 {
            out.set_real_pair(l, m, acc[lm_index(l, m)]);
        }
    }
    out
}

/// Constant in front of the commutator when comparing it with the
/// Poisson bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BracketScaling {
    /// `1/ħ` with `ħ = 2/√(N²−1)` exactly as written for the rescaled
    /// commutator. With a Frobenius-orthonormal basis the two sides then
    /// differ by the factor `−√(N/4π)`, so this error does not tend to zero.
    Printed,
    /// `−√(4π/N)/ħ`, which absorbs the basis normalization and the
    /// orientation sign. The error is `O(N⁻²)` for bandlimited fields.
    #[default]
    Normalized,
}

impl BracketScaling {
    /// Factor `c` in `p_N({f, g}) ≈ c [p_N f, p_N g]`.
    pub fn factor(self, ctx: &QuantizationContext) -> f64 {
        match self {
            BracketScaling::Printed => 1.0 / ctx.hbar(),
            BracketScaling::Normalized => -(4.0 * PI / ctx.n() as f64).sqrt() / ctx.hbar(),
        }
    }
}

/// `‖p_N({f, g}) − c [p_N f, p_N g]‖_F` with the normalized scaling.
pub fn bracket_consistency_error(f: &SphCoeffs, g: &SphCoeffs, n: usize) -> Result<f64> {
    let ctx = QuantizationContext::new(n)?;
    bracket_consistency_error_with(f, g, &ctx, BracketScaling::Normalized)
}

/// As [`bracket_consistency_error`], reusing a context and choosing the
/// commutator scaling.
pub fn bracket_consistency_error_with(
    f: &SphCoeffs,
    g: &SphCoeffs,
    ctx: &QuantizationContext,
    scaling: BracketScaling,
) -> Result<f64> {
    if f.l_max() > ctx.l_max() || g.l_max() > ctx.l_max() {
        return Err(Error::domain("fields are not bandlimited below N"));
    }
    let bracket = poisson_bracket_coeffs(f, g, ctx.l_max());
    let lhs = ctx.project(&bracket)?;
    let pf = ctx.project(f)?;
    let pg = ctx.project(g)?;
    let rhs = commutator(pf.matrix(), pg.matrix()) * Complex64::new(scaling.factor(ctx), 0.0);
    Ok((lhs.matrix() - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(6);
        let sum: f64 = w.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        // ∫ x^10 = 2/11, exact for 6 nodes
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((q - 2.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn bracket_of_field_with_itself_vanishes() {
        let mut f = SphCoeffs::zeros(3);
        f.set_real_pair(2, 1, Complex64::new(0.3, 0.8));
        f.set_real_pair(3, 0, Complex64::new(-0.5, 0.0));
        let ctx = QuantizationContext::new(8).unwrap();
        for s in [BracketScaling::Printed, BracketScaling::Normalized] {
            let e = bracket_consistency_error_with(&f, &f, &ctx, s).unwrap();
            assert!(e < 1e-12, "{e}");
        }
    }

    #[test]
    fn azimuthal_rotation_bracket() {
        // {cos ϑ, g} = −∂φ g for the bracket (f_ϑ g_φ − f_φ g_ϑ)/sin ϑ.
        let mut f = SphCoeffs::zeros(2);
        f.set(1, 0, Complex64::new((4.0 * PI / 3.0).sqrt(), 0.0));
        let mut g = SphCoeffs::zeros(2);
        g.set_real_pair(2, 1, Complex64::new(0.4, -0.3));
        let b = poisson_bracket_coeffs(&f, &g, 2);
        let i = Complex64::new(0.0, 1.0);
        for (l, m, w) in g.iter() {
            let want = -(i * m as f64 * w);
            assert!((b.get(l, m) - want).norm() < 1e-13, "l={l} m={m}");
        }
    }
}
