//! Matrix Lie algebras used as state spaces.
//!
//! Every state ingredient is an `n × n` complex matrix constrained to a
//! J-quadratic algebra with `J = I`: either `su(n)` (skew-Hermitian,
//! traceless) or `so(3)` (real skew-symmetric 3 × 3). Both satisfy
//! `A† + A = 0`, which is all the midpoint integrators rely on.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix.
pub type CMat = DMatrix<Complex64>;

/// Relative tolerance for algebra membership checks.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Which algebra an element belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgebraTag {
    Su,
    So3,
}

impl AlgebraTag {
    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraTag::Su => "su",
            AlgebraTag::So3 => "so3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "su" => Some(AlgebraTag::Su),
            "so3" => Some(AlgebraTag::So3),
            _ => None,
        }
    }
}

/// A matrix together with the algebra it is known to lie in.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    tag: AlgebraTag,
    data: CMat,
}

impl AlgebraElement {
    /// Wraps `data`, checking membership to [`MEMBERSHIP_TOL`] relative to
    /// the Frobenius norm.
    pub fn new(tag: AlgebraTag, data: CMat) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::domain("algebra element must be square"));
        }
        if tag == AlgebraTag::So3 && data.nrows() != 3 {
            return Err(Error::domain("so3 elements are 3x3"));
        }
        let defect = membership_defect(tag, &data);
        let norm = data.norm();
        if defect > MEMBERSHIP_TOL * norm {
            return Err(Error::domain(format!(
                "matrix is not in {} (defect {defect:e}, norm {norm:e})",
                tag.as_str()
            )));
        }
        Ok(AlgebraElement { tag, data })
    }

    /// Wraps `data` after projecting it onto the algebra.
    pub fn projected(tag: AlgebraTag, mut data: CMat) -> Self {
        project_in_place(tag, &mut data);
        AlgebraElement { tag, data }
    }

    pub fn zeros(tag: AlgebraTag, n: usize) -> Self {
        AlgebraElement {
            tag,
            data: CMat::zeros(n, n),
        }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.data
    }

    pub fn into_matrix(self) -> CMat {
        self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    /// Absolute membership defect, see [`membership_defect`].
    pub fn defect(&self) -> f64 {
        membership_defect(self.tag, &self.data)
    }

    /// `self − other` as an algebra element.
    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        debug_assert_eq!(self.tag, other.tag);
        AlgebraElement {
            tag: self.tag,
            data: &self.data - &other.data,
        }
    }
}

/// Largest violation of the membership constraints: `max |(A + A†)_ij|`,
/// `|tr A|`, and for `so3` the largest imaginary entry.
pub fn membership_defect(tag: AlgebraTag, a: &CMat) -> f64 {
    let n = a.nrows();
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            defect = defect.max((a[(i, j)] + a[(j, i)].conj()).norm());
        }
    }
    defect = defect.max(a.trace().norm());
    if tag == AlgebraTag::So3 {
        for z in a.iter() {
            defect = defect.max(z.im.abs());
        }
    }
    defect
}

/// Orthogonal projection onto the algebra: `(A − A†)/2` with the trace
/// removed; for `so3` the imaginary part is dropped as well.
pub fn project_in_place(tag: AlgebraTag, a: &mut CMat) {
    let n = a.nrows();
    for i in 0..n {
        for j in i..n {
            let s = (a[(i, j)] - a[(j, i)].conj()) * 0.5;
            a[(i, j)] = s;
            a[(j, i)] = -s.conj();
        }
    }
    let shift = a.trace() / n as f64;
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    if tag == AlgebraTag::So3 {
        for z in a.iter_mut() {
            z.im = 0.0;
        }
    }
}

/// `[a, b] = ab − ba`.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Frobenius pairing `⟨a, b⟩ = tr(a† b)`.
pub fn frobenius_inner(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Hat map `R³ → so(3)`: `hat(v) w = v × w`.
pub fn hat(v: [f64; 3]) -> AlgebraElement {
    let c = |x: f64| Complex64::new(x, 0.0);
    let z = c(0.0);
    let data = CMat::from_row_slice(
        3,
        3,
        &[z, c(-v[2]), c(v[1]), c(v[2]), z, c(-v[0]), c(-v[1]), c(v[0]), z],
    );
    AlgebraElement {
        tag: AlgebraTag::So3,
        data,
    }
}

/// Inverse of [`hat`]; reads `(A_32, A_13, A_21)`.
pub fn vee(a: &CMat) -> [f64; 3] {
    [a[(2, 1)].re, a[(0, 2)].re, a[(1, 0)].re]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hat_vee_roundtrip_and_cross_product() {
        let a = [0.3, -1.2, 2.0];
        let b = [1.5, 0.25, -0.75];
        let ha = hat(a);
        assert_eq!(vee(ha.matrix()), a);
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        let br = commutator(ha.matrix(), hat(b).matrix());
        let got = vee(&br);
        for k in 0..3 {
            assert!((got[k] - cross[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_members() {
        let m = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(AlgebraElement::new(AlgebraTag::Su, m).is_err());
        let herm = CMat::from_row_slice(2, 2, &[c(0.0, 1.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, -1.0)]);
        assert!(AlgebraElement::new(AlgebraTag::Su, herm).is_err());
        let skew = CMat::from_row_slice(2, 2, &[c(0.0, 1.0), c(1.0, 0.5), c(-1.0, 0.5), c(0.0, -1.0)]);
        assert!(AlgebraElement::new(AlgebraTag::Su, skew).is_ok());
    }

    #[test]
    fn projection_is_idempotent_and_lands_in_algebra() {
        let m = CMat::from_fn(4, 4, |i, j| c((i * 3 + j) as f64 * 0.1, (j as f64) - 0.7 * i as f64));
        let p = AlgebraElement::projected(AlgebraTag::Su, m);
        assert!(p.defect() < 1e-15);
        let again = AlgebraElement::projected(AlgebraTag::Su, p.matrix().clone());
        assert!((again.matrix() - p.matrix()).norm() < 1e-15);
    }
}
