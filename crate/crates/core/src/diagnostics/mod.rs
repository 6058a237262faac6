//! Conserved quantities, their time series, and drift summaries.

mod spectrum;

pub use spectrum::{hermitian_eigenvalues, spectrum};

use crate::algebra::{AlgebraElement, CMat};
use crate::error::{Error, Result};

/// Casimir degrees recorded by default: `tr(A^k)` for these `k`.
pub const TRACE_DEGREES: [u32; 3] = [2, 3, 4];
/// Default degrees `d` for `tr(W Θ^d)`.
pub const HELICITY_DEGREES: [u32; 3] = [1, 2, 3];

/// `tr(M)` of a product of `degree` skew-Hermitian factors, as a real
/// number.
///
/// Such a trace is real for even degree and imaginary for odd degree; the
/// nonzero component is returned and the other one must vanish.
fn skew_trace(m: &CMat, degree: u32, scale: f64) -> f64 {
    let tr = m.trace();
    let (keep, drop) = if degree.is_multiple_of(2) {
        (tr.re, tr.im)
    } else {
        (tr.im, tr.re)
    };
    debug_assert!(
        drop.abs() <= 1e-10 * scale.max(1.0),
        "trace residue {drop:e} for degree {degree}"
    );
    keep
}

fn power(a: &CMat, k: u32) -> CMat {
    let mut out = a.clone();
    for _ in 1..k {
        out = &out * a;
    }
    out
}

/// `tr(A^k)` for skew-Hermitian `A` and `k ≥ 1`.
///
/// Even `k` gives the real trace, odd `k` the imaginary part. So
/// `trace_casimir(A, 2) = −Σ λ_i²` with `λ` the spectrum of `−iA`.
pub fn trace_casimir(a: &AlgebraElement, k: u32) -> f64 {
    assert!(k >= 1);
    let scale = a.norm().powi(k as i32);
    skew_trace(&power(a.matrix(), k), k, scale)
}

/// `tr(W Θ^d)` for `d ≥ 1`, reported like [`trace_casimir`].
pub fn cross_helicity(w: &AlgebraElement, theta: &AlgebraElement, d: u32) -> f64 {
    assert!(d >= 1);
    let m = w.matrix() * power(theta.matrix(), d);
    let scale = w.norm() * theta.norm().powi(d as i32);
    skew_trace(&m, d + 1, scale)
}

/// Hazeltine Casimirs as named values: `tr((W−χ)^k)`, `tr(Θ^k)` for each
/// `k` in `trace_degrees`, and `tr(χ Θ^d)` for each `d`.
pub fn hazeltine_casimirs(
    w: &AlgebraElement,
    theta: &AlgebraElement,
    chi: &AlgebraElement,
    trace_degrees: &[u32],
    helicity_degrees: &[u32],
) -> Vec<(String, f64)> {
    let psi = w.sub(chi);
    let mut out = Vec::new();
    for &k in trace_degrees {
        out.push((format!("tr_psi{k}"), trace_casimir(&psi, k)));
    }
    for &k in trace_degrees {
        out.push((format!("tr_theta{k}"), trace_casimir(theta, k)));
    }
    for &d in helicity_degrees {
        out.push((format!("tr_chi_theta{d}"), cross_helicity(chi, theta, d)));
    }
    out
}

/// Conserved quantities evaluated at one instant.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Sample {
    pub hamiltonian: f64,
    pub scalars: Vec<(String, f64)>,
    pub spectra: Vec<(String, Vec<f64>)>,
}

/// Time series of samples for one trajectory.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticsRecord {
    pub times: Vec<f64>,
    pub hamiltonian: Vec<f64>,
    pub scalar_names: Vec<String>,
    /// `scalars[q][t]`, aligned with `scalar_names`.
    pub scalars: Vec<Vec<f64>>,
    pub spectrum_names: Vec<String>,
    /// `spectra[q][t]` is the sorted spectrum at sample `t`.
    pub spectra: Vec<Vec<Vec<f64>>>,
    /// Stage iterations of the step that produced each sample.
    pub iterations: Vec<usize>,
}

impl DiagnosticsRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends a sample. The first sample fixes the quantity names; later
    /// samples must match them and have a strictly larger time.
    pub fn push(&mut self, time: f64, sample: Sample, iterations: usize) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if time <= last {
                return Err(Error::domain(format!("sample time {time} does not follow {last}")));
            }
            let same_layout = sample.scalars.iter().map(|(n, _)| n).eq(self.scalar_names.iter())
                && sample.spectra.iter().map(|(n, _)| n).eq(self.spectrum_names.iter());
            if !same_layout {
                return Err(Error::domain("sample quantities differ from the record layout"));
            }
        } else {
            self.scalar_names = sample.scalars.iter().map(|(n, _)| n.clone()).collect();
            self.spectrum_names = sample.spectra.iter().map(|(n, _)| n.clone()).collect();
            self.scalars = vec![Vec::new(); self.scalar_names.len()];
            self.spectra = vec![Vec::new(); self.spectrum_names.len()];
        }
        self.times.push(time);
        self.hamiltonian.push(sample.hamiltonian);
        for (q, (_, v)) in sample.scalars.into_iter().enumerate() {
            self.scalars[q].push(v);
        }
        for (q, (_, v)) in sample.spectra.into_iter().enumerate() {
            self.spectra[q].push(v);
        }
        self.iterations.push(iterations);
        Ok(())
    }

    pub fn scalar(&self, name: &str) -> Option<&[f64]> {
        let q = self.scalar_names.iter().position(|n| n == name)?;
        Some(&self.scalars[q])
    }

    pub fn spectrum_series(&self, name: &str) -> Option<&[Vec<f64>]> {
        let q = self.spectrum_names.iter().position(|n| n == name)?;
        Some(&self.spectra[q])
    }
}

/// Hamiltonian drift summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianDrift {
    pub max_deviation: f64,
    /// Least-squares slope of `H(t)`.
    pub slope: f64,
    /// `max H − min H`.
    pub amplitude: f64,
    /// Time span `t_last − t_first`.
    pub span: f64,
}

impl HamiltonianDrift {
    /// `|slope| · T ≤ tol · amplitude`.
    pub fn has_no_secular_trend(&self, tol: f64) -> bool {
        self.slope.abs() * self.span <= tol * self.amplitude
    }
}

/// Maximum deviation from the initial value for every recorded quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    pub scalars: Vec<(String, f64)>,
    /// Largest deviation over all eigenvalue indices.
    pub spectra: Vec<(String, f64)>,
    pub hamiltonian: HamiltonianDrift,
}

impl DriftReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.scalars
            .iter()
            .chain(&self.spectra)
            .find(|(n, _)| n == name)
            .map(|&(_, v)| v)
    }

    /// Largest deviation among all Casimirs and spectra.
    pub fn max_casimir_deviation(&self) -> f64 {
        self.scalars
            .iter()
            .chain(&self.spectra)
            .map(|&(_, v)| v)
            .fold(0.0, f64::max)
    }
}

fn max_dev(series: &[f64]) -> f64 {
    let x0 = series[0];
    series.iter().map(|x| (x - x0).abs()).fold(0.0, f64::max)
}

/// Least-squares slope of `y` against `t` (centred to limit cancellation).
pub fn least_squares_slope(t: &[f64], y: &[f64]) -> f64 {
    let n = t.len() as f64;
    if t.len() < 2 {
        return 0.0;
    }
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let mut sty = 0.0;
    let mut stt = 0.0;
    for (ti, yi) in t.iter().zip(y) {
        sty += (ti - tm) * (yi - ym);
        stt += (ti - tm) * (ti - tm);
    }
    if stt == 0.0 {
        0.0
    } else {
        sty / stt
    }
}

/// Summarizes a nonempty record.
pub fn drift_report(record: &DiagnosticsRecord) -> Result<DriftReport> {
    if record.is_empty() {
        return Err(Error::domain("empty diagnostics record"));
    }
    let scalars = record
        .scalar_names
        .iter()
        .zip(&record.scalars)
        .map(|(n, s)| (n.clone(), max_dev(s)))
        .collect();
    let spectra = record
        .spectrum_names
        .iter()
        .zip(&record.spectra)
        .map(|(n, series)| {
            let first = &series[0];
            let dev = series
                .iter()
                .flat_map(|s| s.iter().zip(first).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            (n.clone(), dev)
        })
        .collect();
    let h = &record.hamiltonian;
    let (lo, hi) = h.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    let hamiltonian = HamiltonianDrift {
        max_deviation: max_dev(h),
        slope: least_squares_slope(&record.times, h),
        amplitude: hi - lo,
        span: record.times[record.times.len() - 1] - record.times[0],
    };
    Ok(DriftReport {
        scalars,
        spectra,
        hamiltonian,
    })
}
