use num_complex::Complex64;

use crate::algebra::CMat;
use crate::error::Result;

fn axpy(x: &[CMat], a: f64, k: &[CMat]) -> Vec<CMat> {
    let a = Complex64::new(a, 0.0);
    x.iter().zip(k).map(|(x, k)| x + k * a).collect()
}

/// Classical explicit RK4 step of `ẋ = f(x)`. Not structure-preserving;
/// kept as a contrast baseline.
pub fn rk4_baseline_step<F>(x: &[CMat], f: F, h: f64) -> Result<Vec<CMat>>
where
    F: Fn(&[CMat]) -> Result<Vec<CMat>>,
{
    let k1 = f(x)?;
    let k2 = f(&axpy(x, h / 2.0, &k1))?;
    let k3 = f(&axpy(x, h / 2.0, &k2))?;
    let k4 = f(&axpy(x, h, &k3))?;
    let c = |v: f64| Complex64::new(v, 0.0);
    Ok(x.iter()
        .enumerate()
        .map(|(i, xi)| xi + (&k1[i] + &k2[i] * c(2.0) + &k3[i] * c(2.0) + &k4[i]) * c(h / 6.0))
        .collect())
}
