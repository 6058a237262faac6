//! Configuration files, output formats and the run driver used by the
//! command-line tool.

mod config;
mod formats;
mod run;

pub use config::{parse_config, serialize_config, KirchhoffCoefficients, RunConfig};
pub use formats::{
    grid_name, parse_snapshot, parse_timeseries, snapshot_name, timeseries_columns, write_grid, write_snapshot,
    Snapshot, TimeSeries,
};
pub use run::{initial_state, resume, run, RunOptions, RunSummary};

use crate::error::Error;

/// Process exit code for an error: 2 for bad input, 3 for a failed stage
/// solve, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. } | Error::Format { .. } | Error::Domain(_) => 2,
        Error::NonConvergence(_) => 3,
        Error::Eigen { .. } | Error::Io(_) => 1,
    }
}
