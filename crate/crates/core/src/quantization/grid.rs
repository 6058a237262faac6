//! Evaluation of spherical-harmonic expansions on latitude–longitude grids.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::basis::{lm_index, SphCoeffs};
use crate::error::{Error, Result};

/// Orthonormal associated Legendre values
/// `√((2l+1)/4π · (l−m)!/(l+m)!) P_l^m(x)` for `0 ≤ m ≤ l ≤ l_max`,
/// Condon–Shortley phase included. Indexed `[l][m]`.
///
/// Stable forward recurrence in `l` starting from the sectoral values.
pub fn legendre_normalized(l_max: usize, x: f64) -> Vec<Vec<f64>> {
    let sin_t = (1.0 - x * x).max(0.0).sqrt();
    let mut p = vec![Vec::new(); l_max + 1];
    for (l, row) in p.iter_mut().enumerate() {
        *row = vec![0.0; l + 1];
    }
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=l_max {
        if m > 0 {
            let mf = m as f64;
            pmm *= -sin_t * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
        }
        p[m][m] = pmm;
        if m + 1 > l_max {
            break;
        }
        p[m + 1][m] = x * (2.0 * m as f64 + 3.0).sqrt() * pmm;
        let mut a_prev = (2.0 * m as f64 + 3.0).sqrt();
        for l in (m + 2)..=l_max {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            p[l][m] = a * (x * p[l - 1][m] - p[l - 2][m] / a_prev);
            a_prev = a;
        }
    }
    p
}

/// `Y_lm(ϑ, φ)` for `1 ≤ l ≤ l_max`, all `m`, in [`SphCoeffs`] order.
/// Negative orders use `Y_{l,−m} = (−1)^m conj(Y_lm)`.
pub fn spherical_harmonics(l_max: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    let p = legendre_normalized(l_max, theta.cos());
    let mut out = vec![Complex64::new(0.0, 0.0); (l_max + 1) * (l_max + 1) - 1];
    for l in 1..=l_max {
        for m in 0..=l {
            let y = Complex64::from_polar(p[l][m], m as f64 * phi);
            out[lm_index(l, m as i64)] = y;
            if m > 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                out[lm_index(l, -(m as i64))] = y.conj() * sign;
            }
        }
    }
    out
}

/// `Re Σ ω^{lm} Y_lm(ϑ, φ)` at one point.
pub fn evaluate_at(coeffs: &SphCoeffs, theta: f64, phi: f64) -> f64 {
    let y = spherical_harmonics(coeffs.l_max(), theta, phi);
    coeffs.iter().map(|(l, m, w)| (w * y[lm_index(l, m)]).re).sum()
}

/// Samples of a real field on a cell-centred colatitude grid
/// `ϑ_a = (a + ½)π/n_lat` and uniform longitudes `φ_b = 2πb/n_lon`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub n_lat: usize,
    pub n_lon: usize,
    /// Row-major: `values[a * n_lon + b]`.
    pub values: Vec<f64>,
}

impl GridField {
    pub fn theta(&self, a: usize) -> f64 {
        grid_theta(self.n_lat, a)
    }

    pub fn phi(&self, b: usize) -> f64 {
        grid_phi(self.n_lon, b)
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.n_lon + b]
    }

    /// Midpoint-rule approximation of `∫ f dΩ`.
    pub fn integrate(&self) -> f64 {
        let d_theta = PI / self.n_lat as f64;
        let d_phi = 2.0 * PI / self.n_lon as f64;
        (0..self.n_lat)
            .map(|a| {
                let row: f64 = self.values[a * self.n_lon..(a + 1) * self.n_lon].iter().sum();
                row * self.theta(a).sin()
            })
            .sum::<f64>()
            * d_theta
            * d_phi
    }
}

fn grid_theta(n_lat: usize, a: usize) -> f64 {
    (a as f64 + 0.5) * PI / n_lat as f64
}

fn grid_phi(n_lon: usize, b: usize) -> f64 {
    2.0 * PI * b as f64 / n_lon as f64
}

/// Evaluates the expansion on an `n_lat × n_lon` grid.
pub fn evaluate_on_grid(coeffs: &SphCoeffs, n_lat: usize, n_lon: usize) -> Result<GridField> {
    if n_lat < 2 || n_lon < 2 {
        return Err(Error::domain(format!("grid must be at least 2x2, got {n_lat}x{n_lon}")));
    }
    let l_max = coeffs.l_max();
    let mut values = vec![0.0; n_lat * n_lon];
    // e^{imφ_b} for m = 0..=l_max
    let phases: Vec<Vec<Complex64>> = (0..n_lon)
        .map(|b| {
            let phi = grid_phi(n_lon, b);
            (0..=l_max)
                .map(|m| Complex64::from_polar(1.0, m as f64 * phi))
                .collect()
        })
        .collect();
    for a in 0..n_lat {
        let p = legendre_normalized(l_max, grid_theta(n_lat, a).cos());
        // Fold ±m into one complex amplitude per m ≥ 0:
        // ω^{lm} Y_lm + ω^{l,−m} Y_{l,−m} = P̄ (ω^{lm} e^{imφ} + (−1)^m ω^{l,−m} e^{−imφ}).
        let mut amp_pos = vec![Complex64::new(0.0, 0.0); l_max + 1];
        let mut amp_neg = vec![Complex64::new(0.0, 0.0); l_max + 1];
        for l in 1..=l_max {
            for m in 0..=l {
                amp_pos[m] += coeffs.get(l, m as i64) * p[l][m];
                if m > 0 {
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    amp_neg[m] += coeffs.get(l, -(m as i64)) * (p[l][m] * sign);
                }
            }
        }
        for b in 0..n_lon {
            let e = &phases[b];
            let mut v = 0.0;
            for m in 0..=l_max {
                v += (amp_pos[m] * e[m]).re;
                if m > 0 {
                    v += (amp_neg[m] * e[m].conj()).re;
                }
            }
            values[a * n_lon + b] = v;
        }
    }
    Ok(GridField { n_lat, n_lon, values })
}
