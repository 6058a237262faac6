//! The time-stepping driver behind `run` and `resume`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::config::{serialize_config, RunConfig};
use super::formats::{
    grid_name, parse_snapshot, snapshot_name, write_grid, write_snapshot, write_timeseries_header,
    write_timeseries_row, Snapshot, MANIFEST_HEADER,
};
use crate::error::{Error, Result};
use crate::models::{Model, ModelState};
use crate::quantization::evaluate_on_grid;

/// Where and how verbosely to write.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub quiet: bool,
}

/// Outcome of a run.
#[derive(Debug)]
pub struct RunSummary {
    /// Last step reached with a valid state.
    pub last_step: u64,
    pub final_state: ModelState,
    /// `Some` if the run stopped early because a stage solve failed.
    pub failure: Option<Error>,
}

/// Builds the model and the seeded initial state for a configuration.
pub fn initial_state(cfg: &RunConfig) -> Result<(Model, ModelState)> {
    let model = cfg.build_model()?;
    let state = model.random_state(cfg.l_cut.unwrap_or(1), cfg.gamma, cfg.seed)?;
    Ok((model, state))
}

/// Runs from the seeded initial condition.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<RunSummary> {
    let (model, state) = initial_state(cfg)?;
    drive(cfg, &model, state, 0, opts, None)
}

/// Continues a run from a snapshot written by an earlier run.
pub fn resume(snapshot: &Path, cfg: &RunConfig, opts: &RunOptions) -> Result<RunSummary> {
    let snap = parse_snapshot(&fs::read_to_string(snapshot)?)?;
    let model = cfg.build_model()?;
    if snap.state.kind() != model.kind() || snap.state.fields()[0].dim() != model.dim() {
        return Err(Error::config(
            "model",
            0,
            format!(
                "snapshot holds a {} state of size {}, configuration describes {} of size {}",
                snap.state.kind().as_str(),
                snap.state.fields()[0].dim(),
                model.kind().as_str(),
                model.dim()
            ),
        ));
    }
    if snap.step > cfg.steps() {
        return Err(Error::config(
            "T_final",
            0,
            format!("snapshot step {} lies beyond the final step {}", snap.step, cfg.steps()),
        ));
    }
    drive(cfg, &model, snap.state, snap.step, opts, Some(snapshot))
}

fn write_manifest(cfg: &RunConfig, dir: &Path, start: u64, resumed_from: Option<&Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(dir.join("manifest.txt"))?);
    writeln!(out, "{MANIFEST_HEADER}")?;
    writeln!(out, "# code_version {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# steps {} start_step {start}", cfg.steps())?;
    if let Some(p) = resumed_from {
        writeln!(out, "# resumed_from {}", p.display())?;
    }
    out.write_all(serialize_config(cfg).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn write_outputs(model: &Model, cfg: &RunConfig, dir: &Path, step: u64, state: &ModelState) -> Result<()> {
    let time = step as f64 * cfg.h;
    let snap = Snapshot {
        step,
        time,
        state: state.clone(),
    };
    let mut out = BufWriter::new(File::create(dir.join(snapshot_name(step)))?);
    write_snapshot(&mut out, &snap)?;
    out.flush()?;
    if let Some(ctx) = model.quantization() {
        for (name, field) in state.kind().field_names().iter().zip(state.fields()) {
            let grid = evaluate_on_grid(&ctx.to_coeffs(field)?, cfg.grid_n_lat, cfg.grid_n_lon)?;
            let mut out = BufWriter::new(File::create(dir.join(grid_name(name, step)))?);
            write_grid(&mut out, name, step, time, &grid)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn drive(
    cfg: &RunConfig,
    model: &Model,
    mut state: ModelState,
    start: u64,
    opts: &RunOptions,
    resumed_from: Option<&Path>,
) -> Result<RunSummary> {
    let dir = opts.out_dir.as_path();
    fs::create_dir_all(dir)?;
    write_manifest(cfg, dir, start, resumed_from)?;
    let integrator = cfg.integrator();
    let total = cfg.steps();

    let scheme = if cfg.baseline { "rk4-baseline" } else { "midpoint" };
    let size = cfg.n.map_or(String::new(), |n| format!(" N {n}"));
    let description = format!(
        "model {}{size} scheme {scheme} h {:?} start_step {start}",
        cfg.model.as_str(),
        cfg.h
    );
    let mut series = BufWriter::new(File::create(dir.join("timeseries.dat"))?);
    let first = model.sample(&state)?;
    write_timeseries_header(&mut series, &description, &first)?;
    if start.is_multiple_of(cfg.sample_every) {
        write_timeseries_row(&mut series, start, start as f64 * cfg.h, &first, 0)?;
    }
    if start.is_multiple_of(cfg.output_every) || start == total {
        write_outputs(model, cfg, dir, start, &state)?;
    }

    let mut step = start;
    while step < total {
        let (next, report) = match model.step(&state, &integrator) {
            Ok(r) => r,
            Err(err @ Error::NonConvergence(_)) => {
                series.flush()?;
                write_outputs(model, cfg, dir, step, &state)?;
                return Ok(RunSummary {
                    last_step: step,
                    final_state: state,
                    failure: Some(err),
                });
            }
            Err(err) => return Err(err),
        };
        state = next;
        step += 1;
        if step.is_multiple_of(cfg.sample_every) || step == total {
            let sample = model.sample(&state)?;
            write_timeseries_row(&mut series, step, step as f64 * cfg.h, &sample, report.iterations)?;
        }
        if step.is_multiple_of(cfg.output_every) || step == total {
            write_outputs(model, cfg, dir, step, &state)?;
            if !opts.quiet {
                eprintln!("step {step}/{total} t = {:.6}", step as f64 * cfg.h);
            }
        }
    }
    series.flush()?;
    Ok(RunSummary {
        last_step: step,
        final_state: state,
        failure: None,
    })
}
