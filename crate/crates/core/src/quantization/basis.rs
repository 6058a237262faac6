use nalgebra::DMatrix;
use num_complex::Complex64;

use super::laplacian::DiagonalOperators;
use super::wigner::wigner3j_doubled;
use crate::algebra::{AlgebraElement, AlgebraTag, CMat};
use crate::error::{Error, Result};

/// Index of `(l, m)` in the packed triangular layout (`l ≥ 1`).
#[inline]
pub(crate) fn lm_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m - 1) as usize
}

/// Complex spherical-harmonic coefficients `ω^{lm}` for `1 ≤ l ≤ l_max`.
///
/// The `l = 0` mode is absent: fields are zero-mean. Real fields satisfy
/// `ω^{l,−m} = (−1)^m conj(ω^{lm})`; [`SphCoeffs::set_real_pair`] keeps
/// that relation when writing.
#[derive(Debug, Clone, PartialEq)]
pub struct SphCoeffs {
    l_max: usize,
    data: Vec<Complex64>,
}

impl SphCoeffs {
    pub fn zeros(l_max: usize) -> Self {
        assert!(l_max >= 1, "l_max must be at least 1");
        SphCoeffs {
            l_max,
            data: vec![Complex64::new(0.0, 0.0); (l_max + 1) * (l_max + 1) - 1],
        }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn get(&self, l: usize, m: i64) -> Complex64 {
        assert!(l >= 1 && l <= self.l_max && m.unsigned_abs() as usize <= l);
        self.data[lm_index(l, m)]
    }

    /// Writes a single entry without touching its `−m` partner.
    pub fn set(&mut self, l: usize, m: i64, value: Complex64) {
        assert!(l >= 1 && l <= self.l_max && m.unsigned_abs() as usize <= l);
        self.data[lm_index(l, m)] = value;
    }

    /// Writes `ω^{lm} = value` and its partner `ω^{l,−m}`. For `m = 0` the
    /// imaginary part is discarded.
    pub fn set_real_pair(&mut self, l: usize, m: i64, value: Complex64) {
        if m == 0 {
            self.set(l, 0, Complex64::new(value.re, 0.0));
        } else {
            let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            self.set(l, m, value);
            self.set(l, -m, value.conj() * sign);
        }
    }

    /// Iterates `(l, m, ω^{lm})` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        (1..=self.l_max).flat_map(move |l| (-(l as i64)..=l as i64).map(move |m| (l, m, self.data[lm_index(l, m)])))
    }

    /// Largest violation of the reality relation.
    pub fn reality_defect(&self) -> f64 {
        self.iter()
            .filter(|&(_, m, _)| m >= 0)
            .map(|(l, m, w)| {
                let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                (self.get(l, -m) - w.conj() * sign).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Applies `f(l)` to every coefficient of degree `l`.
    pub fn scale_by_degree(&mut self, f: impl Fn(usize) -> f64) {
        for l in 1..=self.l_max {
            let s = f(l);
            for m in -(l as i64)..=l as i64 {
                self.data[lm_index(l, m)] *= s;
            }
        }
    }

    pub fn max_abs_diff(&self, other: &SphCoeffs) -> f64 {
        assert_eq!(self.l_max, other.l_max);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A real matrix supported on one diagonal: entry `t` sits at
/// `(t + max(0, −offset), t + max(0, offset))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    pub offset: i64,
    pub values: Vec<f64>,
}

impl BandMatrix {
    #[inline]
    pub fn position(&self, t: usize) -> (usize, usize) {
        diag_position(self.offset, t)
    }

    pub fn to_dense(&self, n: usize) -> CMat {
        let mut out = CMat::zeros(n, n);
        for (t, &v) in self.values.iter().enumerate() {
            let (i, j) = self.position(t);
            out[(i, j)] = Complex64::new(v, 0.0);
        }
        out
    }

    /// `⟨self, a⟩ = tr(selfᵀ a)` over the support of `self`.
    pub fn inner(&self, a: &CMat) -> Complex64 {
        self.values
            .iter()
            .enumerate()
            .map(|(t, &v)| {
                let (i, j) = self.position(t);
                a[(i, j)] * v
            })
            .sum()
    }
}

#[inline]
pub(crate) fn diag_position(offset: i64, t: usize) -> (usize, usize) {
    if offset >= 0 {
        (t, t + offset as usize)
    } else {
        (t + (-offset) as usize, t)
    }
}

/// Everything that depends only on the matrix size `N`: the `T^N_lm`
/// basis, spin generators, Laplacian eigenvalues and the per-diagonal
/// tridiagonal Laplacian factors.
///
/// Immutable once built; share it freely across threads.
#[derive(Debug, Clone)]
pub struct QuantizationContext {
    n: usize,
    basis: Vec<BandMatrix>,
    generators: [CMat; 3],
    ladders: [CMat; 2],
    lap_eigs: Vec<f64>,
    pub(crate) diag_ops: DiagonalOperators,
}

impl QuantizationContext {
    /// Builds the context for `N ≥ 2`.
    ///
    /// Row `i` corresponds to `m1 = (N−1)/2 − i`, so `X3` is diagonal with
    /// descending entries and `T_lm` occupies the diagonal with offset `m`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("N must be at least 2, got {n}")));
        }
        let basis = build_basis_matrices(n)?;
        let (generators, ladders) = spin_generators(n);
        let lap_eigs = (0..n).map(|l| -((l * (l + 1)) as f64)).collect();
        let mut ctx = QuantizationContext {
            n,
            basis,
            generators,
            ladders,
            lap_eigs,
            diag_ops: DiagonalOperators::empty(),
        };
        ctx.diag_ops = DiagonalOperators::derive(&ctx);
        Ok(ctx)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l_max(&self) -> usize {
        self.n - 1
    }

    /// `T^N_lm` for `1 ≤ l ≤ N−1`, `|m| ≤ l`.
    pub fn basis(&self, l: usize, m: i64) -> &BandMatrix {
        assert!(l >= 1 && l < self.n && m.unsigned_abs() as usize <= l);
        &self.basis[lm_index(l, m)]
    }

    /// All basis matrices in `(l, m)` storage order.
    pub fn basis_iter(&self) -> impl Iterator<Item = (usize, i64, &BandMatrix)> + '_ {
        (1..self.n).flat_map(move |l| (-(l as i64)..=l as i64).map(move |m| (l, m, &self.basis[lm_index(l, m)])))
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// Hermitian generators `(X1, X2, X3)` with
    /// `[X_a, X_b] = 2iε_abc X_c/√(N²−1)` and `ΣX_a² = I`.
    pub fn generators(&self) -> &[CMat; 3] {
        &self.generators
    }

    /// `(X+, X−) = (X1 + iX2, X1 − iX2)`.
    pub fn ladders(&self) -> &[CMat; 2] {
        &self.ladders
    }

    /// Laplacian eigenvalue `−l(l+1)`.
    pub fn lap_eig(&self, l: usize) -> f64 {
        self.lap_eigs[l]
    }

    /// Quantization rescaling `ħ = 2/√(N²−1)`.
    pub fn hbar(&self) -> f64 {
        2.0 / ((self.n * self.n - 1) as f64).sqrt()
    }

    /// `W = Σ i ω^{lm} T_lm`.
    pub fn project(&self, coeffs: &SphCoeffs) -> Result<AlgebraElement> {
        if coeffs.l_max() > self.l_max() {
            return Err(Error::domain(format!(
                "coefficients up to l = {} do not fit N = {}",
                coeffs.l_max(),
                self.n
            )));
        }
        let scale = coeffs.iter().map(|(_, _, c)| c.norm()).fold(0.0, f64::max);
        if coeffs.reality_defect() > crate::algebra::MEMBERSHIP_TOL * scale {
            return Err(Error::domain("coefficients violate the reality relation"));
        }
        let i = Complex64::new(0.0, 1.0);
        let mut w = CMat::zeros(self.n, self.n);
        for (l, m, c) in coeffs.iter() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let t = self.basis(l, m);
            for (k, &v) in t.values.iter().enumerate() {
                let (r, s) = t.position(k);
                w[(r, s)] += i * c * v;
            }
        }
        Ok(AlgebraElement::projected(AlgebraTag::Su, w))
    }

    /// `ω^{lm} = ⟨i T_lm, W⟩` for all `l ≤ N−1`.
    pub fn to_coeffs(&self, w: &AlgebraElement) -> Result<SphCoeffs> {
        if w.tag() != AlgebraTag::Su || w.dim() != self.n {
            return Err(Error::domain(format!("expected an element of su({})", self.n)));
        }
        let defect = w.defect();
        if defect > crate::algebra::MEMBERSHIP_TOL * w.norm() {
            return Err(Error::domain("input is not in su(N)"));
        }
        Ok(self.to_coeffs_raw(w.matrix()))
    }

    pub(crate) fn to_coeffs_raw(&self, w: &CMat) -> SphCoeffs {
        let minus_i = Complex64::new(0.0, -1.0);
        let mut out = SphCoeffs::zeros(self.l_max());
        for (idx, t) in self.basis.iter().enumerate() {
            out.data[idx] = minus_i * t.inner(w);
        }
        out
    }
}

fn build_basis_matrices(n: usize) -> Result<Vec<BandMatrix>> {
    let two_s = (n - 1) as i64;
    let mut basis = Vec::with_capacity(n * n - 1);
    for l in 1..n {
        let norm = ((2 * l + 1) as f64).sqrt();
        for m in -(l as i64)..=(l as i64) {
            let len = n - m.unsigned_abs() as usize;
            let mut values = Vec::with_capacity(len);
            for t in 0..len {
                let (row, col) = diag_position(m, t);
                let two_m1 = two_s - 2 * row as i64;
                let two_m2 = two_s - 2 * col as i64;
                // phase (−1)^{s − m1} with s − m1 = row
                let phase = if row % 2 == 0 { 1.0 } else { -1.0 };
                let w3j = wigner3j_doubled([two_s, 2 * l as i64, two_s], [-two_m1, 2 * m, two_m2])?;
                values.push(phase * norm * w3j);
            }
            basis.push(BandMatrix { offset: m, values });
        }
    }
    Ok(basis)
}

fn spin_generators(n: usize) -> ([CMat; 3], [CMat; 2]) {
    let s = (n as f64 - 1.0) / 2.0;
    let scale = 2.0 / ((n * n - 1) as f64).sqrt();
    let c = |x: f64| Complex64::new(x, 0.0);
    let x3 = CMat::from_fn(n, n, |i, j| if i == j { c(scale * (s - i as f64)) } else { c(0.0) });
    // S+ |m⟩ = √(s(s+1) − m(m+1)) |m+1⟩, and |m+1⟩ sits one row up.
    let mut xp = CMat::zeros(n, n);
    for i in 1..n {
        let m = s - i as f64;
        xp[(i - 1, i)] = c(scale * (s * (s + 1.0) - m * (m + 1.0)).sqrt());
    }
    let xm = xp.transpose();
    let x1 = (&xp + &xm) * c(0.5);
    let x2 = (&xp - &xm) * Complex64::new(0.0, -0.5);
    ([x1, x2, x3], [xp, xm])
}

/// Dense real matrix of `T_lm` (tests and diagnostics).
pub fn basis_dense(ctx: &QuantizationContext, l: usize, m: i64) -> DMatrix<f64> {
    let t = ctx.basis(l, m);
    let mut out = DMatrix::zeros(ctx.n(), ctx.n());
    for (k, &v) in t.values.iter().enumerate() {
        let (i, j) = t.position(k);
        out[(i, j)] = v;
    }
    out
}
