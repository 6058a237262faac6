use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::quantization::SphCoeffs;

/// Seeded generator used for every random initial condition.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian coefficients scaled by `l^{−γ}` for `1 ≤ l ≤ l_cut`.
///
/// Draw order: `l` ascending, then `m = 0..=l`. `m = 0` takes one real
/// draw, `m > 0` two (real, imaginary). Negative orders follow from the
/// reality relation.
pub fn random_coeffs<R: Rng>(l_cut: usize, gamma: f64, rng: &mut R) -> SphCoeffs {
    let mut c = SphCoeffs::zeros(l_cut);
    for l in 1..=l_cut {
        let scale = (l as f64).powf(-gamma);
        for m in 0..=l as i64 {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if m == 0 { 0.0 } else { rng.sample(StandardNormal) };
            c.set_real_pair(l, m, Complex64::new(re, im) * scale);
        }
    }
    c
}

/// Three standard normal draws.
pub fn random_vector<R: Rng>(rng: &mut R) -> [f64; 3] {
    [
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    ]
}
