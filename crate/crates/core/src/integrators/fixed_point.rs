use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{IntegratorConfig, StageReport};
use crate::algebra::CMat;
use crate::error::{Error, Result};

/// Frobenius norm of a list of matrices viewed as one vector.
pub fn concat_norm(x: &[CMat]) -> f64 {
    x.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

/// Real-coefficient Anderson mixing over the last few iterates. Real
/// coefficients keep every extrapolated iterate in the same real vector
/// space (e.g. skew-Hermitian traceless matrices) as the map's images.
struct Anderson {
    depth: usize,
    df: VecDeque<Vec<CMat>>,
    dg: VecDeque<Vec<CMat>>,
    prev: Option<(Vec<CMat>, Vec<CMat>)>,
}

fn real_inner(a: &[CMat], b: &[CMat]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            x.iter()
                .zip(y.iter())
                .map(|(p, q)| p.re * q.re + p.im * q.im)
                .sum::<f64>()
        })
        .sum()
}

fn diff(a: &[CMat], b: &[CMat]) -> Vec<CMat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl Anderson {
    fn new(depth: usize) -> Self {
        Anderson {
            depth,
            df: VecDeque::new(),
            dg: VecDeque::new(),
            prev: None,
        }
    }

    /// Next iterate from the image `g` and the residual `f = g − x`.
    fn next(&mut self, g: Vec<CMat>, f: Vec<CMat>) -> Vec<CMat> {
        if self.depth == 0 {
            return g;
        }
        if let Some((pg, pf)) = self.prev.take() {
            self.df.push_back(diff(&f, &pf));
            self.dg.push_back(diff(&g, &pg));
            if self.df.len() > self.depth {
                self.df.pop_front();
                self.dg.pop_front();
            }
        }
        let m = self.df.len();
        let mut out = g.clone();
        if m > 0 {
            let gram = DMatrix::from_fn(m, m, |i, j| real_inner(&self.df[i], &self.df[j]));
            let rhs = DVector::from_fn(m, |i, _| real_inner(&self.df[i], &f));
            let scale = gram.diagonal().max().max(f64::MIN_POSITIVE);
            if let Ok(gamma) = gram.svd(true, true).solve(&rhs, 1e-12 * scale) {
                for (j, dg) in self.dg.iter().enumerate() {
                    let c = Complex64::new(gamma[j], 0.0);
                    for (o, d) in out.iter_mut().zip(dg) {
                        *o -= d * c;
                    }
                }
            }
        }
        self.prev = Some((g, f));
        out
    }
}

/// Consecutive non-improving iterations tolerated while polishing.
/// Anderson residuals are not monotone near the rounding floor, so stopping
/// at the first bounce leaves a heavy tail of under-solved steps.
const POLISH_PATIENCE: usize = 4;

/// Picard iteration `x ← map(x)` from `guess`, optionally Anderson-mixed
/// when `cfg.anderson > 0`.
///
/// Converges once `‖map(x) − x‖ ≤ fp_tol · max(1, ‖x‖)` and returns the
/// last image `map(x)`. With `cfg.polish`, iteration then continues until
/// the residual has failed to improve a few times in a row, and the image
/// with the smallest residual is returned. Casimir errors per step are
/// proportional to the stage residual, so polishing is what keeps long runs
/// at rounding level. Missing `fp_tol` within `fp_max_iters` yields
/// [`Error::NonConvergence`].
pub fn fixed_point_solve<F>(mut map: F, guess: Vec<CMat>, cfg: &IntegratorConfig) -> Result<(Vec<CMat>, StageReport)>
where
    F: FnMut(&[CMat]) -> Result<Vec<CMat>>,
{
    let mut mixer = Anderson::new(cfg.anderson);
    let mut x = guess;
    let mut residual = f64::INFINITY;
    let mut best: Option<Vec<CMat>> = None;
    let mut stalled = 0;
    let done = |image, iterations, residual| {
        Ok((
            image,
            StageReport {
                iterations,
                residual,
                converged: true,
            },
        ))
    };
    for k in 1..=cfg.fp_max_iters {
        let g = map(&x)?;
        let f = diff(&g, &x);
        let r = concat_norm(&f) / concat_norm(&x).max(1.0);
        if !r.is_finite() {
            break;
        }
        if best.is_none() && r <= cfg.fp_tol && !cfg.polish {
            return done(g, k, r);
        }
        if r < residual {
            residual = r;
            stalled = 0;
            if r <= cfg.fp_tol {
                if r == 0.0 {
                    return done(g, k, r);
                }
                best = Some(g.clone());
            }
        } else if best.is_some() {
            stalled += 1;
        }
        if let Some(b) = &best {
            if stalled >= POLISH_PATIENCE || k == cfg.fp_max_iters {
                return done(b.clone(), k, residual);
            }
        }
        x = mixer.next(g, f);
    }
    Err(Error::NonConvergence(StageReport {
        iterations: cfg.fp_max_iters,
        residual,
        converged: false,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_converges_immediately() {
        let x = vec![CMat::from_element(2, 2, Complex64::new(1.0, 2.0))];
        let (y, r) = fixed_point_solve(|v| Ok(v.to_vec()), x.clone(), &IntegratorConfig::default()).unwrap();
        assert_eq!(y, x);
        assert_eq!(r.iterations, 1);
        assert_eq!(r.residual, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn affine_contraction_reaches_its_fixed_point() {
        let c = CMat::from_element(3, 3, Complex64::new(0.25, -1.0));
        let (y, r) = fixed_point_solve(
            |v| Ok(vec![&v[0] * Complex64::new(0.5, 0.0) + &c]),
            vec![CMat::zeros(3, 3)],
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert!((&y[0] - &c * Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(r.converged && r.residual <= 1e-13);
    }

    #[test]
    fn polishing_goes_past_the_tolerance() {
        let c = CMat::from_element(2, 2, Complex64::new(1.0, 0.5));
        let map = |v: &[CMat]| Ok(vec![&v[0] * Complex64::new(0.1, 0.0) + &c]);
        let loose = IntegratorConfig {
            fp_tol: 1e-6,
            polish: false,
            ..Default::default()
        };
        let (_, plain) = fixed_point_solve(map, vec![CMat::zeros(2, 2)], &loose).unwrap();
        let (y, polished) = fixed_point_solve(
            map,
            vec![CMat::zeros(2, 2)],
            &IntegratorConfig { polish: true, ..loose },
        )
        .unwrap();
        assert!(polished.iterations > plain.iterations);
        assert!(polished.residual < 1e-14);
        assert!((&y[0] - &c / Complex64::new(0.9, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn anderson_mixing_accelerates_a_slow_contraction() {
        // A rotation-dominated linear map with contraction factor 0.95.
        let n = 4;
        let rot = CMat::from_fn(n, n, |i, j| Complex64::new(0.0, ((i + 2 * j) as f64).sin() * 0.3));
        let a = (&rot - rot.adjoint()) * Complex64::new(0.5, 0.0);
        let c = CMat::from_fn(n, n, |i, j| Complex64::new(i as f64 - j as f64, (i * j) as f64 * 0.1));
        let map = |v: &[CMat]| {
            Ok(vec![
                (&a * &v[0] - &v[0] * &a + &v[0]) * Complex64::new(0.95 / 1.5, 0.0) + &c,
            ])
        };
        // Compare iterations to reach fp_tol; polishing past it is not
        // what mixing accelerates.
        let plain = IntegratorConfig {
            fp_max_iters: 5000,
            polish: false,
            ..Default::default()
        };
        let mixed = IntegratorConfig { anderson: 5, ..plain };
        let (_, r1) = fixed_point_solve(map, vec![CMat::zeros(n, n)], &plain).unwrap();
        let (_, r2) = fixed_point_solve(map, vec![CMat::zeros(n, n)], &mixed).unwrap();
        assert!(
            r2.iterations * 3 < r1.iterations,
            "{} vs {}",
            r2.iterations,
            r1.iterations
        );

        let polished = |cfg: IntegratorConfig| {
            fixed_point_solve(map, vec![CMat::zeros(n, n)], &IntegratorConfig { polish: true, ..cfg })
                .unwrap()
                .0
        };
        assert!((&polished(plain)[0] - &polished(mixed)[0]).norm() < 1e-12);
    }

    #[test]
    fn expanding_map_reports_non_convergence() {
        let cfg = IntegratorConfig {
            fp_max_iters: 5,
            ..Default::default()
        };
        let err = fixed_point_solve(
            |v| Ok(vec![&v[0] * Complex64::new(2.0, 0.0)]),
            vec![CMat::from_element(1, 1, Complex64::new(1.0, 0.0))],
            &cfg,
        )
        .unwrap_err();
        match err {
            Error::NonConvergence(r) => {
                assert_eq!(r.iterations, 5);
                assert!(!r.converged);
            }
            other => panic!("unexpected {other}"),
        }
    }
}
