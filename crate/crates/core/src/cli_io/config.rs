//! Flat `key = value` run configuration.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::integrators::IntegratorConfig;
use crate::models::{KirchhoffParams, KirchhoffPreset, Model, ModelKind};
use crate::quantization::QuantizationContext;

/// Custom Kirchhoff coefficients: `a`, then `b` and `c` row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct KirchhoffCoefficients {
    pub a: [f64; 3],
    pub b: [[f64; 3]; 3],
    pub c: [[f64; 3]; 3],
}

/// A fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    /// Matrix size; `None` for Kirchhoff.
    pub n: Option<usize>,
    pub h: f64,
    pub t_final: f64,
    pub alpha: Option<f64>,
    pub kirchhoff_preset: Option<KirchhoffPreset>,
    pub kirchhoff_coefficients: Option<KirchhoffCoefficients>,
    pub seed: u64,
    /// Highest degree of the random initial data (quantized models).
    pub l_cut: Option<usize>,
    pub gamma: f64,
    /// Snapshot (and grid) cadence in steps.
    pub output_every: u64,
    /// Time-series cadence in steps.
    pub sample_every: u64,
    pub grid_n_lat: usize,
    pub grid_n_lon: usize,
    pub fp_tol: f64,
    pub fp_max_iters: usize,
    pub fp_polish: bool,
    /// Anderson mixing depth for the stage solve; 0 is plain Picard.
    pub fp_anderson: usize,
    pub baseline: bool,
}

const KEYS: &[&str] = &[
    "model",
    "N",
    "h",
    "T_final",
    "alpha",
    "kirchhoff_preset",
    "kirchhoff_a",
    "kirchhoff_b",
    "kirchhoff_c",
    "seed",
    "L_cut",
    "gamma",
    "output_every",
    "sample_every",
    "grid_n_lat",
    "grid_n_lon",
    "fp_tol",
    "fp_max_iters",
    "fp_polish",
    "fp_anderson",
    "baseline",
];

struct Entries<'a> {
    /// `(key, value, line)` in file order.
    items: Vec<(&'a str, &'a str, usize)>,
    used: Vec<bool>,
}

impl<'a> Entries<'a> {
    fn take(&mut self, key: &str) -> Option<(&'a str, usize)> {
        let idx = self.items.iter().position(|(k, _, _)| *k == key)?;
        self.used[idx] = true;
        Some((self.items[idx].1, self.items[idx].2))
    }

    fn line_of(&self, key: &str) -> usize {
        self.items.iter().find(|(k, _, _)| *k == key).map_or(0, |e| e.2)
    }

    fn parsed<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Result<Option<(T, usize)>> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<T>()
                .map(|x| Some((x, line)))
                .map_err(|_| Error::config(key, line, format!("expected {what}, got `{v}`"))),
        }
    }

    fn required<T: std::str::FromStr>(&mut self, key: &str, what: &str) -> Result<(T, usize)> {
        self.parsed(key, what)?
            .ok_or_else(|| Error::config(key, 0, "missing required key"))
    }

    fn forbid(&mut self, key: &str, reason: &str) -> Result<()> {
        match self.take(key) {
            Some((_, line)) => Err(Error::config(key, line, reason.to_string())),
            None => Ok(()),
        }
    }
}

fn parse_list<const K: usize>(key: &str, line: usize, v: &str) -> Result<[f64; K]> {
    let vals: Vec<f64> = v
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::config(key, line, format!("expected {K} comma-separated numbers")))?;
    vals.try_into()
        .map_err(|v: Vec<f64>| Error::config(key, line, format!("expected {K} numbers, got {}", v.len())))
}

fn to_matrix(v: [f64; 9]) -> [[f64; 3]; 3] {
    [[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]]
}

fn positive(key: &str, line: usize, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::config(
            key,
            line,
            format!("must be positive and finite, got {x}"),
        ))
    }
}

/// Parses and validates a configuration. Missing keys are reported with
/// line 0.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content
            .split_once('=')
            .ok_or_else(|| Error::config(content, line, "expected `key = value`"))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(Error::config(k, line, "unknown key"));
        }
        if items.iter().any(|(key, _, _)| *key == k) {
            return Err(Error::config(k, line, "duplicate key"));
        }
        items.push((k, v, line));
    }
    let used = vec![false; items.len()];
    let mut e = Entries { items, used };

    let (model_str, model_line) = e.required::<String>("model", "a model name")?;
    let model = ModelKind::parse(&model_str).ok_or_else(|| {
        Error::config(
            "model",
            model_line,
            format!("unknown model `{model_str}` (euler, mhd, hazeltine, kirchhoff)"),
        )
    })?;

    let (t_final, line) = e.required::<f64>("T_final", "a number")?;
    let t_final = positive("T_final", line, t_final)?;
    let h = match e.parsed::<f64>("h", "a number")? {
        Some((h, line)) => positive("h", line, h)?,
        None => 0.1,
    };
    let steps = t_final / h;
    if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) || steps.round() < 1.0 {
        return Err(Error::config(
            "T_final",
            e.line_of("T_final"),
            format!("T_final = {t_final} is not a positive whole number of steps h = {h}"),
        ));
    }

    let n = if model.is_quantized() {
        let (n, line) = e.required::<usize>("N", "an integer")?;
        if n < 2 {
            return Err(Error::config("N", line, "N must be at least 2"));
        }
        Some(n)
    } else {
        e.forbid("N", "kirchhoff has no matrix size")?;
        None
    };

    let alpha = if model == ModelKind::Hazeltine {
        let (a, line) = e.required::<f64>("alpha", "a number")?;
        if !a.is_finite() {
            return Err(Error::config("alpha", line, "must be finite"));
        }
        Some(a)
    } else {
        e.forbid("alpha", "alpha applies only to the hazeltine model")?;
        None
    };

    let (kirchhoff_preset, kirchhoff_coefficients) = if model == ModelKind::Kirchhoff {
        let (name, line) = e.required::<String>("kirchhoff_preset", "a preset name")?;
        let preset = KirchhoffPreset::parse(&name).ok_or_else(|| {
            Error::config(
                "kirchhoff_preset",
                line,
                format!("unknown preset `{name}` (kirchhoff, clebsch, lsk, custom)"),
            )
        })?;
        let a = e.take("kirchhoff_a");
        let b = e.take("kirchhoff_b");
        let c = e.take("kirchhoff_c");
        let coeffs = match (a, b, c) {
            (None, None, None) => {
                if preset == KirchhoffPreset::Custom {
                    return Err(Error::config(
                        "kirchhoff_a",
                        0,
                        "the custom preset needs kirchhoff_a, kirchhoff_b, kirchhoff_c",
                    ));
                }
                None
            }
            (Some((a, la)), Some((b, lb)), Some((c, lc))) => Some(KirchhoffCoefficients {
                a: parse_list::<3>("kirchhoff_a", la, a)?,
                b: to_matrix(parse_list::<9>("kirchhoff_b", lb, b)?),
                c: to_matrix(parse_list::<9>("kirchhoff_c", lc, c)?),
            }),
            (a, b, _) => {
                let missing = if a.is_none() {
                    "kirchhoff_a"
                } else if b.is_none() {
                    "kirchhoff_b"
                } else {
                    "kirchhoff_c"
                };
                return Err(Error::config(
                    missing,
                    0,
                    "kirchhoff_a, kirchhoff_b and kirchhoff_c must be given together",
                ));
            }
        };
        (Some(preset), coeffs)
    } else {
        for k in ["kirchhoff_preset", "kirchhoff_a", "kirchhoff_b", "kirchhoff_c"] {
            e.forbid(k, "applies only to the kirchhoff model")?;
        }
        (None, None)
    };

    let seed = e.parsed::<u64>("seed", "a non-negative integer")?.map_or(0, |x| x.0);
    let l_cut = match n {
        Some(n) => {
            let l = e.parsed::<usize>("L_cut", "an integer")?;
            match l {
                Some((l, line)) if l == 0 || l > n - 1 => {
                    return Err(Error::config("L_cut", line, format!("must lie in 1..={}", n - 1)))
                }
                Some((l, _)) => Some(l),
                None => Some(n - 1),
            }
        }
        None => {
            e.forbid("L_cut", "applies only to quantized models")?;
            None
        }
    };
    let gamma = match e.parsed::<f64>("gamma", "a number")? {
        Some((g, line)) if !g.is_finite() => return Err(Error::config("gamma", line, "must be finite")),
        Some((g, _)) => g,
        None => 2.0,
    };
    let mut count = |key: &str, default: u64| -> Result<u64> {
        match e.parsed::<u64>(key, "a positive integer")? {
            Some((0, line)) => Err(Error::config(key, line, "must be at least 1")),
            Some((v, _)) => Ok(v),
            None => Ok(default),
        }
    };
    let output_every = count("output_every", 1000)?;
    let sample_every = count("sample_every", 1)?;
    let grid_n_lat = count("grid_n_lat", 32)? as usize;
    let grid_n_lon = count("grid_n_lon", 64)? as usize;
    let fp_max_iters = count("fp_max_iters", 100)? as usize;
    for (key, v) in [("grid_n_lat", grid_n_lat), ("grid_n_lon", grid_n_lon)] {
        if v < 2 {
            return Err(Error::config(key, e.line_of(key), "grid dimensions must be at least 2"));
        }
    }
    let fp_tol = match e.parsed::<f64>("fp_tol", "a number")? {
        Some((t, line)) => positive("fp_tol", line, t)?,
        None => IntegratorConfig::default().fp_tol,
    };
    let fp_polish = e.parsed::<bool>("fp_polish", "true or false")?.is_none_or(|x| x.0);
    let fp_anderson = e
        .parsed::<usize>("fp_anderson", "a non-negative integer")?
        .map_or(0, |x| x.0);
    let baseline = e.parsed::<bool>("baseline", "true or false")?.is_some_and(|x| x.0);

    debug_assert!(e.used.iter().all(|&u| u), "every known key is consumed or rejected");

    let cfg = RunConfig {
        model,
        n,
        h,
        t_final,
        alpha,
        kirchhoff_preset,
        kirchhoff_coefficients,
        seed,
        l_cut,
        gamma,
        output_every,
        sample_every,
        grid_n_lat,
        grid_n_lon,
        fp_tol,
        fp_max_iters,
        fp_polish,
        fp_anderson,
        baseline,
    };
    if model == ModelKind::Kirchhoff {
        cfg.kirchhoff_params()
            .map_err(|err| Error::config("kirchhoff_preset", e.line_of("kirchhoff_preset"), err.to_string()))?;
    }
    Ok(cfg)
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

/// Canonical text form; `parse_config(&serialize_config(c)) == c`.
pub fn serialize_config(c: &RunConfig) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("model", c.model.as_str().to_string());
    if let Some(n) = c.n {
        kv("N", n.to_string());
    }
    kv("h", format!("{:?}", c.h));
    kv("T_final", format!("{:?}", c.t_final));
    if let Some(a) = c.alpha {
        kv("alpha", format!("{a:?}"));
    }
    if let Some(p) = c.kirchhoff_preset {
        kv("kirchhoff_preset", p.as_str().to_string());
    }
    if let Some(k) = &c.kirchhoff_coefficients {
        kv("kirchhoff_a", join(&k.a));
        kv("kirchhoff_b", join(k.b.as_flattened()));
        kv("kirchhoff_c", join(k.c.as_flattened()));
    }
    kv("seed", c.seed.to_string());
    if let Some(l) = c.l_cut {
        kv("L_cut", l.to_string());
    }
    kv("gamma", format!("{:?}", c.gamma));
    kv("output_every", c.output_every.to_string());
    kv("sample_every", c.sample_every.to_string());
    kv("grid_n_lat", c.grid_n_lat.to_string());
    kv("grid_n_lon", c.grid_n_lon.to_string());
    kv("fp_tol", format!("{:?}", c.fp_tol));
    kv("fp_max_iters", c.fp_max_iters.to_string());
    kv("fp_polish", c.fp_polish.to_string());
    kv("fp_anderson", c.fp_anderson.to_string());
    kv("baseline", c.baseline.to_string());
    s
}

impl RunConfig {
    /// Number of steps to reach `T_final`.
    pub fn steps(&self) -> u64 {
        (self.t_final / self.h).round() as u64
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig {
            h: self.h,
            fp_tol: self.fp_tol,
            fp_max_iters: self.fp_max_iters,
            baseline: self.baseline,
            polish: self.fp_polish,
            anderson: self.fp_anderson,
        }
    }

    pub fn kirchhoff_params(&self) -> Result<KirchhoffParams> {
        let preset = self
            .kirchhoff_preset
            .ok_or_else(|| Error::domain("not a kirchhoff configuration"))?;
        match &self.kirchhoff_coefficients {
            Some(k) => KirchhoffParams::new(preset, k.a, k.b, k.c),
            None => KirchhoffParams::preset(preset),
        }
    }

    /// Builds the model, constructing the quantization context if needed.
    pub fn build_model(&self) -> Result<Model> {
        match self.model {
            ModelKind::Kirchhoff => Ok(Model::kirchhoff(self.kirchhoff_params()?)),
            kind => {
                let ctx = Arc::new(QuantizationContext::new(self.n.expect("quantized models have N"))?);
                match kind {
                    ModelKind::Euler => Ok(Model::euler(ctx)),
                    ModelKind::Mhd => Ok(Model::mhd(ctx)),
                    _ => Model::hazeltine(ctx, self.alpha.expect("hazeltine has alpha")),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_mhd_gets_defaults() {
        let c = parse_config("model = mhd\nN = 6\nT_final = 2\n").unwrap();
        assert_eq!(c.h, 0.1);
        assert_eq!(c.l_cut, Some(5));
        assert_eq!(c.gamma, 2.0);
        assert_eq!(c.output_every, 1000);
        assert_eq!(c.fp_tol, 1e-13);
        assert_eq!(c.steps(), 20);
        assert!(!c.baseline);
    }

    #[test]
    fn missing_n_is_named() {
        let err = parse_config("model = mhd\nT_final = 1\n").unwrap_err();
        match err {
            Error::Config { key, .. } => assert_eq!(key, "N"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_config("# header\nmodel = mhd\nN = 5\nT_final = 1\nspeed = 3\n").unwrap_err();
        match err {
            Error::Config { key, line, .. } => {
                assert_eq!(key, "speed");
                assert_eq!(line, 5);
            }
            other => panic!("{other}"),
        }
        let err = parse_config("model = mhd\nN = five\nT_final = 1\n").unwrap_err();
        assert!(matches!(err, Error::Config { line: 2, .. }));
    }

    #[test]
    fn zero_final_time_is_rejected() {
        assert!(parse_config("model = mhd\nN = 5\nT_final = 0\n").is_err());
        assert!(parse_config("model = mhd\nN = 5\nT_final = 0.25\nh = 0.1\n").is_err());
    }

    #[test]
    fn hazeltine_round_trip() {
        let text = "model = hazeltine # three fields\nN = 5\nalpha = 2\nT_final = 10\nseed = 42\ngamma = 1.5\n";
        let c = parse_config(text).unwrap();
        let again = parse_config(&serialize_config(&c)).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn kirchhoff_custom_requires_coefficients() {
        assert!(parse_config("model = kirchhoff\nkirchhoff_preset = custom\nT_final = 1\n").is_err());
        let text = "model = kirchhoff\nkirchhoff_preset = custom\nT_final = 1\nkirchhoff_a = 1, 2, 3\n\
                    kirchhoff_b = 1,0,0, 0,1,0, 0,0,1\nkirchhoff_c = 2,0,0, 0,2,0, 0,0,2\n";
        let c = parse_config(text).unwrap();
        assert_eq!(parse_config(&serialize_config(&c)).unwrap(), c);
        let asym = text.replace("1,0,0, 0,1,0", "1,0.5,0, 0,1,0");
        assert!(parse_config(&asym).is_err());
    }

    #[test]
    fn alpha_outside_hazeltine_is_rejected() {
        assert!(parse_config("model = mhd\nN = 5\nT_final = 1\nalpha = 1\n").is_err());
    }
}
