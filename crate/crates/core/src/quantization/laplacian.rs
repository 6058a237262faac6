//! The quantized (Hoppe–Yau) Laplacian on `su(N)`.
//!
//! `laplacian_apply` evaluates the nested-commutator form directly. The
//! operator maps every matrix diagonal to itself and acts on it as a real
//! symmetric tridiagonal matrix; [`DiagonalOperators`] extracts those
//! tridiagonals by probing the commutator form, which gives an `O(N²)`
//! apply and solve.

use num_complex::Complex64;

use super::basis::{diag_position, QuantizationContext};
use crate::algebra::{commutator, AlgebraElement, AlgebraTag, CMat, MEMBERSHIP_TOL};
use crate::error::{Error, Result};

/// Which implementation of `Δ_N⁻¹` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolvePath {
    /// Per-diagonal tridiagonal solves, `O(N²)`.
    #[default]
    Fast,
    /// Coefficient space: divide `ω^{lm}` by `−l(l+1)`, `O(N³)`.
    Reference,
}

/// `Δ_N W` from nested commutators with the spin generators.
pub fn laplacian_apply(w: &AlgebraElement, ctx: &QuantizationContext) -> Result<AlgebraElement> {
    check_su(w, ctx)?;
    Ok(AlgebraElement::projected(
        AlgebraTag::Su,
        laplacian_apply_raw(w.matrix(), ctx),
    ))
}

/// Nested-commutator Laplacian on an arbitrary `N × N` matrix:
/// `−((N²−1)/4) ([X3,[X3,W]] + ½[X+,[X−,W]] + ½[X−,[X+,W]])`.
pub fn laplacian_apply_raw(w: &CMat, ctx: &QuantizationContext) -> CMat {
    let n = ctx.n() as f64;
    let [_, _, x3] = ctx.generators();
    let [xp, xm] = ctx.ladders();
    let mut acc = commutator(x3, &commutator(x3, w));
    acc += commutator(xp, &commutator(xm, w)) * Complex64::new(0.5, 0.0);
    acc += commutator(xm, &commutator(xp, w)) * Complex64::new(0.5, 0.0);
    acc * Complex64::new(-(n * n - 1.0) / 4.0, 0.0)
}

/// `Δ_N⁻¹ W` along the fast path.
pub fn laplacian_solve(w: &AlgebraElement, ctx: &QuantizationContext) -> Result<AlgebraElement> {
    laplacian_solve_with(w, ctx, SolvePath::Fast)
}

/// `Δ_N⁻¹ W` along the chosen path. Fails on a nonzero trace.
pub fn laplacian_solve_with(w: &AlgebraElement, ctx: &QuantizationContext, path: SolvePath) -> Result<AlgebraElement> {
    check_su(w, ctx)?;
    let out = match path {
        SolvePath::Fast => ctx.diag_ops.solve(w.matrix()),
        SolvePath::Reference => {
            let mut coeffs = ctx.to_coeffs_raw(w.matrix());
            coeffs.scale_by_degree(|l| 1.0 / ctx.lap_eig(l));
            return ctx.project(&coeffs);
        }
    };
    Ok(AlgebraElement::projected(AlgebraTag::Su, out))
}

fn check_su(w: &AlgebraElement, ctx: &QuantizationContext) -> Result<()> {
    if w.tag() != AlgebraTag::Su || w.dim() != ctx.n() {
        return Err(Error::domain(format!("expected an element of su({})", ctx.n())));
    }
    let tr = w.matrix().trace().norm();
    if tr > MEMBERSHIP_TOL * w.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::domain(format!("input has nonzero trace {tr:e}")));
    }
    Ok(())
}

/// Symmetric tridiagonal block of `Δ_N` on one matrix diagonal, with a
/// precomputed Thomas factorization.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    /// `lower[t]` couples entry `t` to `t − 1` (`lower[0]` unused).
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    /// `upper[t]` couples entry `t` to `t + 1`.
    pub upper: Vec<f64>,
    /// Size of the factorized system (one less than the length on the
    /// main diagonal, where the identity spans the kernel).
    solve_len: usize,
    c_prime: Vec<f64>,
    pivot: Vec<f64>,
}

impl Tridiagonal {
    fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>, singular: bool) -> Self {
        let len = diag.len();
        let solve_len = if singular { len - 1 } else { len };
        let mut c_prime = vec![0.0; solve_len];
        let mut pivot = vec![0.0; solve_len];
        for t in 0..solve_len {
            let p = if t == 0 {
                diag[0]
            } else {
                diag[t] - lower[t] * c_prime[t - 1]
            };
            pivot[t] = p;
            c_prime[t] = if t + 1 < solve_len { upper[t] / p } else { 0.0 };
        }
        Tridiagonal {
            lower,
            diag,
            upper,
            solve_len,
            c_prime,
            pivot,
        }
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let len = self.diag.len();
        for t in 0..len {
            let mut acc = x[t] * self.diag[t];
            if t > 0 {
                acc += x[t - 1] * self.lower[t];
            }
            if t + 1 < len {
                acc += x[t + 1] * self.upper[t];
            }
            y[t] = acc;
        }
    }

    /// Solves in place. On the main diagonal the last unknown is pinned to
    /// zero and the mean is removed afterwards.
    fn solve(&self, x: &mut [Complex64]) {
        let len = self.diag.len();
        let n = self.solve_len;
        for t in 0..n {
            let prev = if t == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                x[t - 1] * self.lower[t]
            };
            x[t] = (x[t] - prev) / self.pivot[t];
        }
        for t in (0..n.saturating_sub(1)).rev() {
            let next = x[t + 1];
            x[t] -= next * self.c_prime[t];
        }
        if n < len {
            x[n] = Complex64::new(0.0, 0.0);
            let mean = x.iter().sum::<Complex64>() / len as f64;
            for v in x.iter_mut() {
                *v -= mean;
            }
        }
    }
}

/// All per-diagonal tridiagonal blocks of `Δ_N`, indexed by offset.
#[derive(Debug, Clone)]
pub(crate) struct DiagonalOperators {
    n: usize,
    blocks: Vec<Tridiagonal>,
}

impl DiagonalOperators {
    pub(crate) fn empty() -> Self {
        DiagonalOperators {
            n: 0,
            blocks: Vec::new(),
        }
    }

    /// Probes `laplacian_apply_raw` with three matrices: all entries whose
    /// row index is `r mod 3`. Since `Δ_N` couples an entry only to its
    /// two neighbours on the same diagonal, each output entry receives
    /// exactly one probe contribution per neighbour.
    pub(crate) fn derive(ctx: &QuantizationContext) -> Self {
        let n = ctx.n();
        let responses: Vec<CMat> = (0..3)
            .map(|r| {
                let probe = CMat::from_fn(n, n, |i, _| {
                    if i % 3 == r {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                });
                laplacian_apply_raw(&probe, ctx)
            })
            .collect();
        let mut blocks = Vec::with_capacity(2 * n - 1);
        for k in -(n as i64 - 1)..=(n as i64 - 1) {
            let len = n - k.unsigned_abs() as usize;
            let mut lower = vec![0.0; len];
            let mut diag = vec![0.0; len];
            let mut upper = vec![0.0; len];
            for t in 0..len {
                let (row, col) = diag_position(k, t);
                let read = |source_row: usize| responses[source_row % 3][(row, col)].re;
                diag[t] = read(row);
                if t > 0 {
                    lower[t] = read(row - 1);
                }
                if t + 1 < len {
                    upper[t] = read(row + 1);
                }
            }
            blocks.push(Tridiagonal::new(lower, diag, upper, k == 0));
        }
        DiagonalOperators { n, blocks }
    }

    pub(crate) fn block(&self, offset: i64) -> &Tridiagonal {
        &self.blocks[(offset + self.n as i64 - 1) as usize]
    }

    fn for_each_diagonal(&self, w: &CMat, mut f: impl FnMut(&Tridiagonal, &mut [Complex64])) -> CMat {
        let n = self.n;
        let mut out = CMat::zeros(n, n);
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for k in -(n as i64 - 1)..=(n as i64 - 1) {
            let len = n - k.unsigned_abs() as usize;
            let x = &mut buf[..len];
            for (t, v) in x.iter_mut().enumerate() {
                *v = w[diag_position(k, t)];
            }
            f(self.block(k), x);
            for (t, v) in x.iter().enumerate() {
                out[diag_position(k, t)] = *v;
            }
        }
        out
    }

    /// `Δ_N W` in `O(N²)`.
    pub(crate) fn apply(&self, w: &CMat) -> CMat {
        let mut tmp = vec![Complex64::new(0.0, 0.0); self.n];
        self.for_each_diagonal(w, |block, x| {
            let y = &mut tmp[..x.len()];
            block.apply(x, y);
            x.copy_from_slice(y);
        })
    }

    /// `Δ_N⁻¹ W` in `O(N²)`; the trace component of `W` is ignored.
    pub(crate) fn solve(&self, w: &CMat) -> CMat {
        self.for_each_diagonal(w, |block, x| block.solve(x))
    }
}
