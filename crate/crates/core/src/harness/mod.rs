// SPDX-License-Identifier: Apache-2.0

//! Configuration ingestion, point and sweep drivers, output.

pub mod config;
pub mod emit;
pub mod run;
pub mod sweep;

pub use config::{AxisName, AxisSpec, Format, Mode, PointParams, RunConfig};
pub use emit::{emit, read_csv, read_json, render, write_rows};
pub use run::{evaluate_point, evaluate_row, run_single, PointResult, SweepRow, COLUMNS};
pub use sweep::{
    fig2_default_config, fig3_default_config, grid_points, run_sweep, sweep_fig2, sweep_fig3,
    SweepResult,
};
