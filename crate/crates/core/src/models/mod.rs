//! The Hamiltonian models: Euler–Zeitlin, quantized MHD, Hazeltine and
//! Kirchhoff, each given by its state, its `M`-map and its Hamiltonian.

mod hazeltine;
mod kirchhoff;
mod mhd;
mod random;

use std::sync::Arc;

pub use hazeltine::{hazeltine_M, hazeltine_hamiltonian, HazeltineModel};
pub use kirchhoff::{kirchhoff_M, kirchhoff_hamiltonian, kirchhoff_invariants, KirchhoffParams, KirchhoffPreset};
pub use mhd::{mhd_M, mhd_hamiltonian, MhdModel};
pub use random::{random_coeffs, random_vector, seeded_rng};

use num_complex::Complex64;

use crate::algebra::{commutator, hat, project_in_place, AlgebraElement, AlgebraTag, CMat};
use crate::diagnostics::{
    cross_helicity, hazeltine_casimirs, spectrum, trace_casimir, DiagnosticsRecord, Sample, HELICITY_DEGREES,
    TRACE_DEGREES,
};
use crate::error::{Error, Result};
use crate::integrators::{
    hazeltine_midpoint_step, isospectral_midpoint_step, magnetic_midpoint_step, rk4_baseline_step, IntegratorConfig,
    StageReport,
};
use crate::quantization::QuantizationContext;

/// Which model a state or configuration refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Euler,
    Mhd,
    Hazeltine,
    Kirchhoff,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Euler => "euler",
            ModelKind::Mhd => "mhd",
            ModelKind::Hazeltine => "hazeltine",
            ModelKind::Kirchhoff => "kirchhoff",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "euler" => ModelKind::Euler,
            "mhd" => ModelKind::Mhd,
            "hazeltine" => ModelKind::Hazeltine,
            "kirchhoff" => ModelKind::Kirchhoff,
            _ => return None,
        })
    }

    /// Field names in storage order.
    pub fn field_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Euler => &["omega"],
            ModelKind::Mhd => &["omega", "theta"],
            ModelKind::Hazeltine => &["omega", "theta", "chi"],
            ModelKind::Kirchhoff => &["m", "p"],
        }
    }

    pub fn algebra(self) -> AlgebraTag {
        match self {
            ModelKind::Kirchhoff => AlgebraTag::So3,
            _ => AlgebraTag::Su,
        }
    }

    pub fn is_quantized(self) -> bool {
        self != ModelKind::Kirchhoff
    }
}

/// State of one of the four models.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelState {
    Euler {
        w: AlgebraElement,
    },
    Mhd {
        w: AlgebraElement,
        theta: AlgebraElement,
    },
    Hazeltine {
        w: AlgebraElement,
        theta: AlgebraElement,
        chi: AlgebraElement,
    },
    Kirchhoff {
        m: AlgebraElement,
        p: AlgebraElement,
    },
}

impl ModelState {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelState::Euler { .. } => ModelKind::Euler,
            ModelState::Mhd { .. } => ModelKind::Mhd,
            ModelState::Hazeltine { .. } => ModelKind::Hazeltine,
            ModelState::Kirchhoff { .. } => ModelKind::Kirchhoff,
        }
    }

    pub fn fields(&self) -> Vec<&AlgebraElement> {
        match self {
            ModelState::Euler { w } => vec![w],
            ModelState::Mhd { w, theta } => vec![w, theta],
            ModelState::Hazeltine { w, theta, chi } => vec![w, theta, chi],
            ModelState::Kirchhoff { m, p } => vec![m, p],
        }
    }

    /// Rebuilds a state from fields in [`ModelKind::field_names`] order.
    pub fn from_fields(kind: ModelKind, fields: Vec<AlgebraElement>) -> Result<Self> {
        let want = kind.field_names().len();
        if fields.len() != want {
            return Err(Error::domain(format!(
                "{} needs {want} fields, got {}",
                kind.as_str(),
                fields.len()
            )));
        }
        let dim = fields[0].dim();
        if fields.iter().any(|f| f.tag() != kind.algebra() || f.dim() != dim) {
            return Err(Error::domain("fields have inconsistent algebra or size"));
        }
        let mut it = fields.into_iter();
        let mut next = || it.next().unwrap();
        Ok(match kind {
            ModelKind::Euler => ModelState::Euler { w: next() },
            ModelKind::Mhd => ModelState::Mhd {
                w: next(),
                theta: next(),
            },
            ModelKind::Hazeltine => ModelState::Hazeltine {
                w: next(),
                theta: next(),
                chi: next(),
            },
            ModelKind::Kirchhoff => ModelState::Kirchhoff { m: next(), p: next() },
        })
    }

    fn matrices(&self) -> Vec<CMat> {
        self.fields().into_iter().map(|f| f.matrix().clone()).collect()
    }

    /// Largest Frobenius distance between corresponding fields.
    pub fn distance(&self, other: &ModelState) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields())
            .map(|(a, b)| (a.matrix() - b.matrix()).norm())
            .fold(0.0, f64::max)
    }
}

/// A model together with its parameters.
#[derive(Debug, Clone)]
pub enum Model {
    /// Single-field Euler–Zeitlin flow `Ẇ = [W, Δ_N⁻¹ W]`.
    Euler(MhdModel),
    Mhd(MhdModel),
    Hazeltine(HazeltineModel),
    Kirchhoff(KirchhoffParams),
}

impl Model {
    pub fn euler(ctx: Arc<QuantizationContext>) -> Self {
        Model::Euler(MhdModel::new(ctx))
    }

    pub fn mhd(ctx: Arc<QuantizationContext>) -> Self {
        Model::Mhd(MhdModel::new(ctx))
    }

    pub fn hazeltine(ctx: Arc<QuantizationContext>, alpha: f64) -> Result<Self> {
        Ok(Model::Hazeltine(HazeltineModel::new(ctx, alpha)?))
    }

    pub fn kirchhoff(params: KirchhoffParams) -> Self {
        Model::Kirchhoff(params)
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Euler(_) => ModelKind::Euler,
            Model::Mhd(_) => ModelKind::Mhd,
            Model::Hazeltine(_) => ModelKind::Hazeltine,
            Model::Kirchhoff(_) => ModelKind::Kirchhoff,
        }
    }

    /// Matrix size of the state fields.
    pub fn dim(&self) -> usize {
        match self {
            Model::Euler(m) | Model::Mhd(m) => m.ctx().n(),
            Model::Hazeltine(m) => m.ctx().n(),
            Model::Kirchhoff(_) => 3,
        }
    }

    /// Quantization context of the matrix models; `None` for Kirchhoff.
    pub fn quantization(&self) -> Option<&QuantizationContext> {
        match self {
            Model::Euler(m) | Model::Mhd(m) => Some(m.ctx()),
            Model::Hazeltine(m) => Some(m.ctx()),
            Model::Kirchhoff(_) => None,
        }
    }

    fn check(&self, state: &ModelState) -> Result<()> {
        if state.kind() != self.kind() || state.fields()[0].dim() != self.dim() {
            return Err(Error::domain(format!(
                "state of kind {} (dim {}) does not match model {} (dim {})",
                state.kind().as_str(),
                state.fields()[0].dim(),
                self.kind().as_str(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Vector field on bare matrices, in field order.
    pub fn rhs(&self, x: &[CMat]) -> Result<Vec<CMat>> {
        Ok(match self {
            Model::Euler(m) => vec![commutator(&x[0], &m.stream(&x[0]))],
            Model::Mhd(m) => {
                let (m1, m2) = m.m_raw(&x[0], &x[1])?;
                vec![commutator(&x[0], &m1) + commutator(&x[1], &m2), commutator(&x[1], &m1)]
            }
            Model::Kirchhoff(p) => {
                let (m1, m2) = p.m_raw(&x[0], &x[1])?;
                vec![commutator(&x[0], &m1) + commutator(&x[1], &m2), commutator(&x[1], &m1)]
            }
            Model::Hazeltine(hz) => {
                let (m1, m2) = hz.mhd.m_raw(&x[0], &x[1])?;
                let m3 = &m1 - &x[2] * Complex64::new(hz.alpha(), 0.0);
                let lorentz = commutator(&x[1], &m2);
                vec![
                    commutator(&x[0], &m1) + &lorentz,
                    commutator(&x[1], &m3),
                    commutator(&x[2], &m1) + lorentz,
                ]
            }
        })
    }

    /// Advances `state` by one step of the structure-preserving scheme, or
    /// of RK4 when `cfg.baseline` is set.
    pub fn step(&self, state: &ModelState, cfg: &IntegratorConfig) -> Result<(ModelState, StageReport)> {
        self.check(state)?;
        if cfg.baseline {
            let tag = self.kind().algebra();
            let next = rk4_baseline_step(&state.matrices(), |x| self.rhs(x), cfg.h)?;
            let fields = next
                .into_iter()
                .map(|mut m| {
                    project_in_place(tag, &mut m);
                    AlgebraElement::projected(tag, m)
                })
                .collect();
            return Ok((ModelState::from_fields(self.kind(), fields)?, StageReport::explicit()));
        }
        match (self, state) {
            (Model::Euler(m), ModelState::Euler { w }) => {
                let (w, r) = isospectral_midpoint_step(w, |v| Ok(m.stream(v)), cfg)?;
                Ok((ModelState::Euler { w }, r))
            }
            (Model::Mhd(m), ModelState::Mhd { w, theta }) => {
                let (w, theta, r) = magnetic_midpoint_step(w, theta, |a, b| m.m_raw(a, b), cfg)?;
                Ok((ModelState::Mhd { w, theta }, r))
            }
            (Model::Kirchhoff(p), ModelState::Kirchhoff { m, p: pm }) => {
                let (m, p, r) = magnetic_midpoint_step(m, pm, |a, b| p.m_raw(a, b), cfg)?;
                Ok((ModelState::Kirchhoff { m, p }, r))
            }
            (Model::Hazeltine(hz), ModelState::Hazeltine { w, theta, chi }) => {
                let (w, theta, chi, r) =
                    hazeltine_midpoint_step(w, theta, chi, hz.alpha(), |a, b| hz.mhd.m_raw(a, b), cfg)?;
                Ok((ModelState::Hazeltine { w, theta, chi }, r))
            }
            _ => unreachable!("checked above"),
        }
    }

    /// The model's Hamiltonian.
    pub fn hamiltonian(&self, state: &ModelState) -> Result<f64> {
        self.check(state)?;
        match (self, state) {
            (Model::Euler(m), ModelState::Euler { w }) => {
                mhd_hamiltonian(w, &AlgebraElement::zeros(AlgebraTag::Su, w.dim()), m.ctx())
            }
            (Model::Mhd(m), ModelState::Mhd { w, theta }) => mhd_hamiltonian(w, theta, m.ctx()),
            (Model::Hazeltine(hz), ModelState::Hazeltine { w, theta, chi }) => {
                hazeltine_hamiltonian(w, theta, chi, hz.alpha(), hz.ctx())
            }
            (Model::Kirchhoff(p), ModelState::Kirchhoff { m, p: pm }) => kirchhoff_hamiltonian(m, pm, p),
            _ => unreachable!("checked above"),
        }
    }

    /// Hamiltonian, Casimirs and conserved spectra at one instant.
    pub fn sample(&self, state: &ModelState) -> Result<Sample> {
        let hamiltonian = self.hamiltonian(state)?;
        let mut scalars = Vec::new();
        let mut spectra = Vec::new();
        match state {
            ModelState::Euler { w } => {
                for k in TRACE_DEGREES {
                    scalars.push((format!("tr_omega{k}"), trace_casimir(w, k)));
                }
                spectra.push(("omega".to_string(), spectrum(w)?));
            }
            ModelState::Mhd { w, theta } => {
                for k in TRACE_DEGREES {
                    scalars.push((format!("tr_theta{k}"), trace_casimir(theta, k)));
                }
                for d in HELICITY_DEGREES {
                    scalars.push((format!("tr_omega_theta{d}"), cross_helicity(w, theta, d)));
                }
                spectra.push(("theta".to_string(), spectrum(theta)?));
            }
            ModelState::Hazeltine { w, theta, chi } => {
                scalars = hazeltine_casimirs(w, theta, chi, &TRACE_DEGREES, &HELICITY_DEGREES);
                spectra.push(("psi".to_string(), spectrum(&w.sub(chi))?));
                spectra.push(("theta".to_string(), spectrum(theta)?));
            }
            ModelState::Kirchhoff { m, p } => {
                let (i1, i2) = kirchhoff_invariants(m, p);
                scalars.push(("p_squared".to_string(), i1));
                scalars.push(("m_dot_p".to_string(), i2));
                spectra.push(("p".to_string(), spectrum(p)?));
            }
        }
        Ok(Sample {
            hamiltonian,
            scalars,
            spectra,
        })
    }

    /// Integrates `steps` steps from `state`, recording a sample at step 0,
    /// every `sample_every` steps and at the last step. Sample times are
    /// `n·h`.
    pub fn trajectory(
        &self,
        mut state: ModelState,
        cfg: &IntegratorConfig,
        steps: u64,
        sample_every: u64,
    ) -> Result<(ModelState, DiagnosticsRecord)> {
        let every = sample_every.max(1);
        let mut record = DiagnosticsRecord::new();
        record.push(0.0, self.sample(&state)?, 0)?;
        for n in 1..=steps {
            let (next, report) = self.step(&state, cfg)?;
            state = next;
            if n % every == 0 || n == steps {
                record.push(n as f64 * cfg.h, self.sample(&state)?, report.iterations)?;
            }
        }
        Ok((state, record))
    }

    /// Seeded random initial condition.
    ///
    /// Quantized models draw each field in turn from one generator, as
    /// Gaussian coefficients up to degree `l_cut` with decay `l^{−γ}`.
    /// Kirchhoff draws standard normal `m` then `p`.
    pub fn random_state(&self, l_cut: usize, gamma: f64, seed: u64) -> Result<ModelState> {
        let mut rng = seeded_rng(seed);
        let kind = self.kind();
        let fields = match self {
            Model::Kirchhoff(_) => vec![hat(random_vector(&mut rng)), hat(random_vector(&mut rng))],
            Model::Euler(m) | Model::Mhd(m) => random_fields(m.ctx(), kind, l_cut, gamma, &mut rng)?,
            Model::Hazeltine(hz) => random_fields(hz.ctx(), kind, l_cut, gamma, &mut rng)?,
        };
        ModelState::from_fields(kind, fields)
    }
}

fn random_fields(
    ctx: &QuantizationContext,
    kind: ModelKind,
    l_cut: usize,
    gamma: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Vec<AlgebraElement>> {
    if l_cut == 0 || l_cut > ctx.l_max() {
        return Err(Error::domain(format!(
            "L_cut must lie in 1..={}, got {l_cut}",
            ctx.l_max()
        )));
    }
    kind.field_names()
        .iter()
        .map(|_| ctx.project(&random_coeffs(l_cut, gamma, rng)))
        .collect()
}
