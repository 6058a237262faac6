//! Eigenvalues of `−iA` for skew-Hermitian `A` by cyclic complex Jacobi.

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, CMat};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Ascending eigenvalues of the Hermitian matrix `−iA`.
pub fn spectrum(a: &AlgebraElement) -> Result<Vec<f64>> {
    let herm = a.matrix() * Complex64::new(0.0, -1.0);
    hermitian_eigenvalues(&herm)
}

/// Ascending eigenvalues of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a
/// diagonal unitary, then annihilates it with a real Jacobi rotation.
pub fn hermitian_eigenvalues(h: &CMat) -> Result<Vec<f64>> {
    let n = h.nrows();
    let mut a = h.clone();
    // Enforce exact Hermitian symmetry so rounding noise cannot accumulate.
    for i in 0..n {
        a[(i, i)].im = 0.0;
        for j in (i + 1)..n {
            let v = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let mut off = off_norm(&a);
    let mut sweeps = 0;
    while off > 1e-17 * scale {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Eigen { sweeps, off_norm: off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
        sweeps += 1;
        let new_off = off_norm(&a);
        if new_off >= off && new_off < 1e-14 * scale {
            break;
        }
        off = new_off;
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

fn off_norm(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut CMat, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // a_pq = r e^{iφ}; after D = diag(1, e^{−iφ})… the pivot is real.
    let e = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    // Unitary G acting on columns p, q:
    //   col_p' = cs·col_p − sn·conj(e)·col_q
    //   col_q' = sn·e·col_p + cs·col_q
    let n = a.nrows();
    let ec = e.conj();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cs - akq * (ec * sn);
        a[(k, q)] = akp * (e * sn) + akq * cs;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cs - aqk * (e * sn);
        a[(q, k)] = apk * (ec * sn) + aqk * cs;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraTag;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_matrix_has_zero_spectrum() {
        let s = spectrum(&AlgebraElement::zeros(AlgebraTag::Su, 4)).unwrap();
        assert_eq!(s, vec![0.0; 4]);
    }

    #[test]
    fn diagonal_case() {
        let d = [0.7, -1.1, 0.1, 0.3];
        let m = CMat::from_fn(4, 4, |i, j| if i == j { c(0.0, d[i]) } else { c(0.0, 0.0) });
        let s = spectrum(&AlgebraElement::new(AlgebraTag::Su, m).unwrap()).unwrap();
        assert_eq!(s, vec![-1.1, 0.1, 0.3, 0.7]);
    }

    #[test]
    fn trace_identities_on_dense_input() {
        let m = CMat::from_fn(6, 6, |i, j| {
            c(((i * 7 + j * 3) as f64).sin(), ((i + 2 * j) as f64).cos())
        });
        let a = AlgebraElement::projected(AlgebraTag::Su, m);
        let s = spectrum(&a).unwrap();
        let sum: f64 = s.iter().sum();
        let sq: f64 = s.iter().map(|x| x * x).sum();
        assert!(sum.abs() < 1e-12);
        assert!((sq - a.norm().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn matches_cubic_roots_for_3x3() {
        // Hermitian H with known characteristic polynomial, solved by the
        // trigonometric cubic formula.
        let h = CMat::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(1.0, 1.0),
                c(0.0, -0.5),
                c(1.0, -1.0),
                c(-1.0, 0.0),
                c(0.3, 0.0),
                c(0.0, 0.5),
                c(0.3, 0.0),
                c(0.5, 0.0),
            ],
        );
        let got = hermitian_eigenvalues(&h).unwrap();
        let tr = h.trace().re;
        let tr2 = (&h * &h).trace().re;
        let det = h.determinant().re;
        // λ³ − p1 λ² + p2 λ − det = 0
        let p1 = tr;
        let p2 = (tr * tr - tr2) / 2.0;
        let q = p1 / 3.0;
        let pp = (p1 * p1 - 3.0 * p2) / 9.0;
        let r = (2.0 * p1.powi(3) - 9.0 * p1 * p2 + 27.0 * det) / 54.0;
        let phi = (r / pp.powf(1.5)).clamp(-1.0, 1.0).acos();
        let mut roots: Vec<f64> = (0..3)
            .map(|k| q + 2.0 * pp.sqrt() * ((phi + 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos())
            .collect();
        roots.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&roots) {
            assert!((a - b).abs() < 1e-10, "{got:?} vs {roots:?}");
        }
    }
}
