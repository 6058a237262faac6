//! Text formats for snapshots, time series and grid samples.
//!
//! Floating-point values are written with `{:.16e}`, which round-trips
//! every `f64` exactly.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::algebra::{AlgebraElement, AlgebraTag};
use crate::diagnostics::Sample;
use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelState};
use crate::quantization::GridField;

pub const SNAPSHOT_HEADER: &str = "# semidirect snapshot v1";
pub const TIMESERIES_HEADER: &str = "# semidirect timeseries v1";
pub const GRID_HEADER: &str = "# semidirect grid v1";
pub const MANIFEST_HEADER: &str = "# semidirect run manifest v1";

pub fn snapshot_name(step: u64) -> String {
    format!("snap_{step:08}.dat")
}

pub fn grid_name(field: &str, step: u64) -> String {
    format!("grid_{field}_{step:08}.dat")
}

/// A state together with its position in the run.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: u64,
    pub time: f64,
    pub state: ModelState,
}

pub fn write_snapshot<W: Write>(out: &mut W, snap: &Snapshot) -> Result<()> {
    let fields = snap.state.fields();
    let kind = snap.state.kind();
    writeln!(out, "{SNAPSHOT_HEADER}")?;
    writeln!(out, "model {}", kind.as_str())?;
    writeln!(out, "algebra {}", kind.algebra().as_str())?;
    writeln!(out, "N {}", fields[0].dim())?;
    writeln!(out, "fields {}", fields.len())?;
    writeln!(out, "step {}", snap.step)?;
    writeln!(out, "time {:.16e}", snap.time)?;
    for (name, f) in kind.field_names().iter().zip(&fields) {
        writeln!(out, "field {name}")?;
        let m = f.matrix();
        for i in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols())
                .map(|j| format!("{:.16e} {:.16e}", m[(i, j)].re, m[(i, j)].im))
                .collect();
            writeln!(out, "{}", row.join(" "))?;
        }
    }
    Ok(())
}

fn bad(message: impl Into<String>) -> Error {
    Error::format("snapshot", message)
}

fn header_value<'a>(lines: &mut impl Iterator<Item = &'a str>, key: &str) -> Result<&'a str> {
    let line = lines.next().ok_or_else(|| bad(format!("missing `{key}` line")))?;
    match line.split_once(' ') {
        Some((k, v)) if k == key => Ok(v.trim()),
        _ => Err(bad(format!("expected `{key} <value>`, found `{line}`"))),
    }
}

pub fn parse_snapshot(text: &str) -> Result<Snapshot> {
    let mut lines = text.lines();
    if lines.next() != Some(SNAPSHOT_HEADER) {
        return Err(bad("missing or unsupported header"));
    }
    let model = header_value(&mut lines, "model")?;
    let kind = ModelKind::parse(model).ok_or_else(|| bad(format!("unknown model `{model}`")))?;
    let tag_str = header_value(&mut lines, "algebra")?;
    let tag = AlgebraTag::parse(tag_str).ok_or_else(|| bad(format!("unknown algebra `{tag_str}`")))?;
    if tag != kind.algebra() {
        return Err(bad(format!("algebra {tag_str} does not match model {model}")));
    }
    let n: usize = header_value(&mut lines, "N")?
        .parse()
        .map_err(|_| bad("N is not an integer"))?;
    let count: usize = header_value(&mut lines, "fields")?
        .parse()
        .map_err(|_| bad("field count is not an integer"))?;
    if count != kind.field_names().len() {
        return Err(bad(format!(
            "{model} has {} fields, file declares {count}",
            kind.field_names().len()
        )));
    }
    let step: u64 = header_value(&mut lines, "step")?
        .parse()
        .map_err(|_| bad("step is not an integer"))?;
    let time: f64 = header_value(&mut lines, "time")?
        .parse()
        .map_err(|_| bad("time is not a number"))?;
    let mut fields = Vec::with_capacity(count);
    for name in kind.field_names() {
        let got = header_value(&mut lines, "field")?;
        if got != *name {
            return Err(bad(format!("expected field `{name}`, found `{got}`")));
        }
        let mut data = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..n {
            let row = lines.next().ok_or_else(|| bad(format!("field {name} is truncated")))?;
            let vals: Vec<f64> = row
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(format!("field {name} row {i} is not numeric")))?;
            if vals.len() != 2 * n {
                return Err(bad(format!(
                    "field {name} row {i} has {} values, expected {}",
                    vals.len(),
                    2 * n
                )));
            }
            for j in 0..n {
                data[(i, j)] = Complex64::new(vals[2 * j], vals[2 * j + 1]);
            }
        }
        fields.push(AlgebraElement::new(tag, data)?);
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(bad("trailing data"));
    }
    Ok(Snapshot {
        step,
        time,
        state: ModelState::from_fields(kind, fields)?,
    })
}

/// Column names of the time series: step, time, Hamiltonian, scalars,
/// spectra (one column per eigenvalue), stage iterations.
pub fn timeseries_columns(sample: &Sample) -> Vec<String> {
    let mut cols = vec!["step".to_string(), "time".to_string(), "hamiltonian".to_string()];
    cols.extend(sample.scalars.iter().map(|(n, _)| n.clone()));
    for (name, eig) in &sample.spectra {
        cols.extend((0..eig.len()).map(|k| format!("{name}_eig{k}")));
    }
    cols.push("iterations".to_string());
    cols
}

pub fn write_timeseries_header<W: Write>(out: &mut W, description: &str, sample: &Sample) -> Result<()> {
    writeln!(out, "{TIMESERIES_HEADER}")?;
    writeln!(out, "# {description}")?;
    writeln!(out, "{}", timeseries_columns(sample).join(" "))?;
    Ok(())
}

pub fn write_timeseries_row<W: Write>(
    out: &mut W,
    step: u64,
    time: f64,
    sample: &Sample,
    iterations: usize,
) -> Result<()> {
    let mut row = format!("{step} {time:.16e} {:.16e}", sample.hamiltonian);
    for (_, v) in &sample.scalars {
        row.push_str(&format!(" {v:.16e}"));
    }
    for (_, eig) in &sample.spectra {
        for v in eig {
            row.push_str(&format!(" {v:.16e}"));
        }
    }
    row.push_str(&format!(" {iterations}"));
    writeln!(out, "{row}")?;
    Ok(())
}

/// A parsed time series: column names and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TimeSeries {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

pub fn parse_timeseries(text: &str) -> Result<TimeSeries> {
    let bad = |m: String| Error::format("timeseries", m);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let columns: Vec<String> = lines
        .next()
        .ok_or_else(|| bad("missing column line".into()))?
        .split_whitespace()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad(format!("row {i} is not numeric")))?;
        if row.len() != columns.len() {
            return Err(bad(format!(
                "row {i} has {} values, expected {}",
                row.len(),
                columns.len()
            )));
        }
        rows.push(row);
    }
    Ok(TimeSeries { columns, rows })
}

pub fn write_grid<W: Write>(out: &mut W, field: &str, step: u64, time: f64, grid: &GridField) -> Result<()> {
    writeln!(out, "{GRID_HEADER}")?;
    writeln!(
        out,
        "# field {field} step {step} time {time:.16e} n_lat {} n_lon {}",
        grid.n_lat, grid.n_lon
    )?;
    writeln!(
        out,
        "# row a: colatitude (a+0.5)*pi/n_lat; column b: longitude 2*pi*b/n_lon"
    )?;
    for a in 0..grid.n_lat {
        let row: Vec<String> = (0..grid.n_lon).map(|b| format!("{:.16e}", grid.get(a, b))).collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}
