//! Wigner 3j symbols via the Racah single-sum formula.
//!
//! Angular momenta are passed doubled (`2j`, `2m`) so half-integers are
//! exact. The prefactor is assembled from a table of `ln n!`; the
//! alternating sum is generated term-to-term by exact integer ratios and
//! accumulated in double-double arithmetic. The sum loses up to eight
//! decimal digits to cancellation around `j ≈ 30`, which plain `f64`
//! accumulation cannot absorb.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Wigner 3j symbol for doubled arguments `(2j1, 2j2, 2j3; 2m1, 2m2, 2m3)`.
///
/// Returns exactly `0.0` when the selection rules fail (`m1+m2+m3 ≠ 0`,
/// triangle inequality, `|m| > j`). Negative `j` or `j − m` not integral is
/// a domain error.
pub fn wigner3j_doubled(tj: [i64; 3], tm: [i64; 3]) -> Result<f64> {
    for k in 0..3 {
        if tj[k] < 0 {
            return Err(Error::domain(format!("negative angular momentum 2j = {}", tj[k])));
        }
        if (tj[k] - tm[k]).rem_euclid(2) != 0 {
            return Err(Error::domain(format!(
                "j - m must be an integer (2j = {}, 2m = {})",
                tj[k], tm[k]
            )));
        }
    }
    if tm[0] + tm[1] + tm[2] != 0 {
        return Ok(0.0);
    }
    if tm.iter().zip(tj.iter()).any(|(m, j)| m.abs() > *j) {
        return Ok(0.0);
    }
    let [a, b, c] = tj;
    if c < (a - b).abs() || c > a + b {
        return Ok(0.0);
    }

    // All of these are integers once the checks above pass.
    let half = |x: i64| -> i64 { x / 2 };
    let j_sum = half(a + b + c);
    let d0 = half(a + b - c);
    let d1 = half(a - b + c);
    let d2 = half(-a + b + c);
    let moments = [
        half(a + tm[0]),
        half(a - tm[0]),
        half(b + tm[1]),
        half(b - tm[1]),
        half(c + tm[2]),
        half(c - tm[2]),
    ];
    // Denominator arguments: k!, (a0+k)!, (a1+k)!, (a2-k)!, (a3-k)!, (a4-k)!
    let a0 = half(c - b + tm[0]);
    let a1 = half(c - a - tm[1]);
    let a2 = d0;
    let a3 = half(a - tm[0]);
    let a4 = half(b + tm[1]);

    let kmin = 0.max(-a0).max(-a1);
    let kmax = a2.min(a3).min(a4);
    if kmin > kmax {
        return Ok(0.0);
    }

    // Relative sum Σ t_k / t_kmin with exact integer ratios.
    let mut term = Dd::from(1.0);
    let mut sum = term;
    for k in kmin..kmax {
        let num = ((a2 - k) * (a3 - k) * (a4 - k)) as f64;
        let den = ((k + 1) * (a0 + k + 1) * (a1 + k + 1)) as f64;
        term = term.mul_f64(-num).div_f64(den);
        sum = sum.add(term);
    }

    let lf = ln_factorial;
    let ln_prefactor = 0.5 * (lf(d0) + lf(d1) + lf(d2) - lf(j_sum + 1) + moments.iter().map(|&n| lf(n)).sum::<f64>())
        - (lf(kmin) + lf(a0 + kmin) + lf(a1 + kmin) + lf(a2 - kmin) + lf(a3 - kmin) + lf(a4 - kmin));

    // Overall phase (−1)^{j1 − j2 − m3} (−1)^{kmin}.
    let phase_exp = half(a - b - tm[2]) + kmin;
    let sign = if phase_exp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * ln_prefactor.exp() * sum.to_f64())
}

/// Wigner 3j symbol for half-integer arguments given as `f64`.
///
/// Every argument must be a multiple of `1/2`.
pub fn wigner3j(j1: f64, j2: f64, j3: f64, m1: f64, m2: f64, m3: f64) -> Result<f64> {
    let dbl = |x: f64| -> Result<i64> {
        let t = 2.0 * x;
        if t.fract() != 0.0 || !t.is_finite() {
            return Err(Error::domain(format!("{x} is not a half-integer")));
        }
        Ok(t as i64)
    };
    wigner3j_doubled([dbl(j1)?, dbl(j2)?, dbl(j3)?], [dbl(m1)?, dbl(m2)?, dbl(m3)?])
}

const LN_FACT_TABLE: usize = 2048;

/// `ln n!`, tabulated with compensated summation.
pub(crate) fn ln_factorial(n: i64) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACT_TABLE);
        let mut acc = Dd::from(0.0);
        t.push(0.0);
        for k in 1..LN_FACT_TABLE {
            acc = acc.add(Dd::from((k as f64).ln()));
            t.push(acc.to_f64());
        }
        t
    });
    debug_assert!(n >= 0);
    let n = n as usize;
    if n < table.len() {
        table[n]
    } else {
        let mut acc = Dd::from(table[table.len() - 1]);
        for k in table.len()..=n {
            acc = acc.add(Dd::from((k as f64).ln()));
        }
        acc.to_f64()
    }
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Dd {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        // self − q1·b, exactly up to the low word
        let p = q1 * b;
        let pe = q1.mul_add(b, -p);
        let (s, e) = two_sum(self.hi, -p);
        let r = s + (e - pe + self.lo);
        let q2 = r / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}
