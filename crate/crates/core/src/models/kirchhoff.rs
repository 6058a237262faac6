//! Kirchhoff's equations for a rigid body in an ideal fluid on
//! `so(3) ⋉ so(3)*`, with the classical integrable parameter sets.

use crate::algebra::{hat, vee, AlgebraElement, AlgebraTag, CMat};
use crate::error::{Error, Result};

const CONSTRAINT_TOL: f64 = 1e-12;

/// Named parameter families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KirchhoffPreset {
    Kirchhoff,
    Clebsch,
    Lsk,
    Custom,
}

impl KirchhoffPreset {
    pub fn as_str(self) -> &'static str {
        match self {
            KirchhoffPreset::Kirchhoff => "kirchhoff",
            KirchhoffPreset::Clebsch => "clebsch",
            KirchhoffPreset::Lsk => "lsk",
            KirchhoffPreset::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "kirchhoff" => KirchhoffPreset::Kirchhoff,
            "clebsch" => KirchhoffPreset::Clebsch,
            "lsk" => KirchhoffPreset::Lsk,
            "custom" => KirchhoffPreset::Custom,
            _ => return None,
        })
    }
}

/// Coefficients of `H = ½(Σ a_k m_k² + Σ b_kj (p_k m_j + m_k p_j) + Σ c_kj p_k p_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KirchhoffParams {
    pub a: [f64; 3],
    pub b: [[f64; 3]; 3],
    pub c: [[f64; 3]; 3],
    pub preset: KirchhoffPreset,
}

fn diag(d: [f64; 3]) -> [[f64; 3]; 3] {
    [[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]]
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= CONSTRAINT_TOL * (1.0 + x.abs().max(y.abs()))
}

impl KirchhoffParams {
    /// Validates symmetry of `b`, `c` and the constraints of `preset`.
    pub fn new(preset: KirchhoffPreset, a: [f64; 3], b: [[f64; 3]; 3], c: [[f64; 3]; 3]) -> Result<Self> {
        let all = a.iter().chain(b.iter().flatten()).chain(c.iter().flatten());
        if all.clone().any(|x| !x.is_finite()) {
            return Err(Error::domain("Kirchhoff parameters must be finite"));
        }
        for (name, m) in [("b", &b), ("c", &c)] {
            for i in 0..3 {
                for j in 0..i {
                    if m[i][j] != m[j][i] {
                        return Err(Error::domain(format!(
                            "{name} must be symmetric ({name}{}{} ≠ {name}{}{})",
                            i + 1,
                            j + 1,
                            j + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        let params = KirchhoffParams { a, b, c, preset };
        if let Some(why) = params.constraint_violation() {
            return Err(Error::domain(format!(
                "{} preset constraint violated: {why}",
                preset.as_str()
            )));
        }
        Ok(params)
    }

    /// Default representative of each integrable family.
    pub fn preset(preset: KirchhoffPreset) -> Result<Self> {
        match preset {
            KirchhoffPreset::Kirchhoff => {
                Self::new(preset, [1.0, 1.0, 2.0], diag([0.5, 0.5, 1.0]), diag([1.0, 1.0, 2.5]))
            }
            KirchhoffPreset::Clebsch => Self::new(preset, [1.0, 2.0, 3.0], diag([0.5; 3]), diag([1.0, 2.0, 7.0 / 3.0])),
            KirchhoffPreset::Lsk => {
                let kappa = 1.0;
                Self::new(
                    preset,
                    [1.0, 2.0, 3.0],
                    diag([1.0, 2.0, 7.0 / 3.0]),
                    diag([kappa + 1.0 / 9.0, kappa + 8.0 / 9.0, kappa + 1.0 / 3.0]),
                )
            }
            KirchhoffPreset::Custom => Err(Error::domain("the custom preset needs explicit coefficients")),
        }
    }

    fn constraint_violation(&self) -> Option<String> {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        if self.preset == KirchhoffPreset::Custom {
            return None;
        }
        for i in 0..3 {
            for j in 0..3 {
                if i != j && (b[i][j] != 0.0 || c[i][j] != 0.0) {
                    return Some("b and c must be diagonal".into());
                }
            }
        }
        let (b1, b2, b3) = (b[0][0], b[1][1], b[2][2]);
        let (c1, c2, c3) = (c[0][0], c[1][1], c[2][2]);
        match self.preset {
            KirchhoffPreset::Kirchhoff => {
                if !(close(a[0], a[1]) && close(b1, b2) && close(c1, c2)) {
                    return Some("need a1 = a2, b11 = b22, c11 = c22".into());
                }
            }
            KirchhoffPreset::Clebsch => {
                if !(close(b1, b2) && close(b2, b3)) {
                    return Some("need b11 = b22 = b33".into());
                }
                let s = (c1 - c2) / a[2] + (c3 - c1) / a[1] + (c2 - c3) / a[0];
                if !close(s, 0.0) {
                    return Some(format!("c/a combination is {s:e}, not 0"));
                }
            }
            KirchhoffPreset::Lsk => {
                let s = (b1 - b2) / a[2] + (b3 - b1) / a[1] + (b2 - b3) / a[0];
                if !close(s, 0.0) {
                    return Some(format!("b/a combination is {s:e}, not 0"));
                }
                let k1 = c1 - (b2 - b3).powi(2) / a[0];
                let k2 = c2 - (b3 - b1).powi(2) / a[1];
                let k3 = c3 - (b1 - b2).powi(2) / a[2];
                if !(close(k1, k2) && close(k2, k3)) {
                    return Some(format!("shifted c entries differ: {k1}, {k2}, {k3}"));
                }
            }
            KirchhoffPreset::Custom => {}
        }
        None
    }

    /// `(ω, u) = (∂H/∂m, ∂H/∂p)`.
    pub fn gradients(&self, m: [f64; 3], p: [f64; 3]) -> ([f64; 3], [f64; 3]) {
        let mut omega = [0.0; 3];
        let mut u = [0.0; 3];
        for i in 0..3 {
            omega[i] = self.a[i] * m[i];
            for k in 0..3 {
                omega[i] += self.b[i][k] * p[k];
                u[i] += self.b[i][k] * m[k] + self.c[i][k] * p[k];
            }
        }
        (omega, u)
    }

    pub fn energy(&self, m: [f64; 3], p: [f64; 3]) -> f64 {
        let mut h = 0.0;
        for k in 0..3 {
            h += self.a[k] * m[k] * m[k];
            for j in 0..3 {
                h += self.b[k][j] * (p[k] * m[j] + m[k] * p[j]) + self.c[k][j] * p[k] * p[j];
            }
        }
        0.5 * h
    }

    /// `(M1, M2) = (hat ω, hat u)` on bare matrices.
    pub fn m_raw(&self, w: &CMat, theta: &CMat) -> Result<(CMat, CMat)> {
        let (omega, u) = self.gradients(vee(w), vee(theta));
        Ok((hat(omega).into_matrix(), hat(u).into_matrix()))
    }
}

fn check_so3(x: &AlgebraElement) -> Result<()> {
    if x.tag() != AlgebraTag::So3 {
        return Err(Error::domain("Kirchhoff states live in so(3)"));
    }
    Ok(())
}

/// `(M1, M2) = (hat ω, hat u)` for `W = hat m`, `Θ = hat p`.
#[allow(non_snake_case)]
pub fn kirchhoff_M(
    m_mat: &AlgebraElement,
    p_mat: &AlgebraElement,
    params: &KirchhoffParams,
) -> Result<(AlgebraElement, AlgebraElement)> {
    check_so3(m_mat)?;
    check_so3(p_mat)?;
    let (omega, u) = params.gradients(vee(m_mat.matrix()), vee(p_mat.matrix()));
    Ok((hat(omega), hat(u)))
}

pub fn kirchhoff_hamiltonian(m_mat: &AlgebraElement, p_mat: &AlgebraElement, params: &KirchhoffParams) -> Result<f64> {
    check_so3(m_mat)?;
    check_so3(p_mat)?;
    Ok(params.energy(vee(m_mat.matrix()), vee(p_mat.matrix())))
}

/// `I1 = |p|²` and `I2 = m·p`.
pub fn kirchhoff_invariants(m_mat: &AlgebraElement, p_mat: &AlgebraElement) -> (f64, f64) {
    let m = vee(m_mat.matrix());
    let p = vee(p_mat.matrix());
    let i1 = p.iter().map(|x| x * x).sum();
    let i2 = m.iter().zip(&p).map(|(a, b)| a * b).sum();
    (i1, i2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_satisfy_their_constraints() {
        for p in [
            KirchhoffPreset::Kirchhoff,
            KirchhoffPreset::Clebsch,
            KirchhoffPreset::Lsk,
        ] {
            KirchhoffParams::preset(p).unwrap();
        }
        assert!(KirchhoffParams::preset(KirchhoffPreset::Custom).is_err());
    }

    #[test]
    fn presets_reject_violations() {
        let bad = KirchhoffParams::new(
            KirchhoffPreset::Kirchhoff,
            [1.0, 1.1, 2.0],
            diag([0.5, 0.5, 1.0]),
            diag([1.0, 1.0, 2.5]),
        );
        assert!(bad.is_err());
        let bad = KirchhoffParams::new(
            KirchhoffPreset::Clebsch,
            [1.0, 2.0, 3.0],
            diag([0.5; 3]),
            diag([1.0, 2.0, 2.4]),
        );
        assert!(bad.is_err());
        let bad = KirchhoffParams::new(
            KirchhoffPreset::Lsk,
            [1.0, 2.0, 3.0],
            diag([1.0, 2.0, 7.0 / 3.0]),
            diag([1.0, 2.0, 3.0]),
        );
        assert!(bad.is_err());
        let mut b = diag([1.0; 3]);
        b[0][1] = 0.2;
        assert!(KirchhoffParams::new(KirchhoffPreset::Custom, [1.0; 3], b, diag([1.0; 3])).is_err());
    }

    #[test]
    fn free_rigid_body() {
        let p = KirchhoffParams::new(KirchhoffPreset::Custom, [1.0; 3], [[0.0; 3]; 3], [[0.0; 3]; 3]).unwrap();
        let m = [0.3, -1.0, 2.0];
        let (omega, u) = p.gradients(m, [1.0, 1.0, 1.0]);
        assert_eq!(omega, m);
        assert_eq!(u, [0.0; 3]);
        assert!((p.energy(m, [0.0; 3]) - 0.5 * (0.09 + 1.0 + 4.0)).abs() < 1e-15);
    }

    #[test]
    fn gradients_match_central_differences() {
        let mut b = diag([0.4, -0.2, 0.9]);
        b[0][2] = 0.3;
        b[2][0] = 0.3;
        let mut c = diag([1.5, 0.7, 2.0]);
        c[1][2] = -0.25;
        c[2][1] = -0.25;
        let params = KirchhoffParams::new(KirchhoffPreset::Custom, [1.2, 0.8, 2.1], b, c).unwrap();
        let m = [0.6, -0.4, 0.9];
        let p = [-0.3, 0.8, 0.5];
        let (omega, u) = params.gradients(m, p);
        let eps = 1e-5;
        for i in 0..3 {
            let (mut mp, mut mm) = (m, m);
            mp[i] += eps;
            mm[i] -= eps;
            let d = (params.energy(mp, p) - params.energy(mm, p)) / (2.0 * eps);
            assert!((d - omega[i]).abs() < 1e-8);
            let (mut pp, mut pm) = (p, p);
            pp[i] += eps;
            pm[i] -= eps;
            let d = (params.energy(m, pp) - params.energy(m, pm)) / (2.0 * eps);
            assert!((d - u[i]).abs() < 1e-8);
        }
    }
}
