// SPDX-License-Identifier: Apache-2.0

//! Grid sweeps over one or more parameter axes.

use std::time::Instant;

use rayon::prelude::*;

use crate::dynamics::PhotoluminescenceModel;
use crate::error::{Error, Result};
use crate::model::PumpEnvelope;

use super::config::{
    AxisName, AxisSpec, DetectionConfig, DriveConfig, Mode, OutputConfig, PhysicsConfig,
    PointParams, RunConfig, ToleranceConfig,
};
use super::run::{evaluate_row, SweepRow};

/// Rows in lexicographic order of the axis indices (first axis outermost).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<AxisName>,
    pub rows: Vec<SweepRow>,
    /// Wall time per row (ms). Not part of the emitted output.
    pub wall_time_ms: Vec<f64>,
}

/// Cartesian product of the sweep axes applied to the base point.
pub fn grid_points(config: &RunConfig) -> Result<Vec<PointParams>> {
    let mut points = vec![config.base_point()?];
    for axis in &config.sweep {
        axis.validate()?;
        let values = axis.values();
        let mut next = Vec::with_capacity(points.len() * values.len());
        for p in &points {
            for &v in &values {
                let mut q = *p;
                q.set(axis.name, v)?;
                next.push(q);
            }
        }
        points = next;
    }
    Ok(points)
}

/// Evaluates every grid point of `config.sweep`. Points are independent and
/// run on the rayon pool; collection preserves grid order.
pub fn run_sweep(config: &RunConfig) -> Result<SweepResult> {
    config.validate()?;
    let points = grid_points(config)?;
    let timed: Vec<(SweepRow, f64)> = points
        .par_iter()
        .map(|p| {
            let start = Instant::now();
            let row = evaluate_row(p, config.mode, &config.detection, &config.tolerances)?;
            Ok((row, start.elapsed().as_secs_f64() * 1e3))
        })
        .collect::<Result<_>>()?;
    let (rows, wall_time_ms) = timed.into_iter().unzip();
    Ok(SweepResult {
        axes: config.sweep.iter().map(|a| a.name).collect(),
        rows,
        wall_time_ms,
    })
}

/// `(Δ, n_b)` grid for `γ_i = γ_s = 1`, inside the stability region.
pub fn fig2_axes() -> Vec<AxisSpec> {
    vec![
        AxisSpec::linear(AxisName::Delta, 0.05, 0.45, 9),
        AxisSpec::linear(AxisName::NB, 0.0, 1.0, 11),
    ]
}

pub fn fig2_default_config() -> RunConfig {
    RunConfig {
        mode: Mode::Analytic,
        physics: PhysicsConfig {
            gamma_i: 1.0,
            gamma_s: 1.0,
            delta: Some(0.25),
            g_s: None,
            pump_amplitude: None,
            cavity: None,
            n_b: 0.0,
            temperature: 0.0,
            omega_i: 0.0,
            photoluminescence: PhotoluminescenceModel::default(),
        },
        drive: DriveConfig::default(),
        detection: DetectionConfig::default(),
        sweep: fig2_axes(),
        output: OutputConfig::default(),
        tolerances: ToleranceConfig::default(),
    }
}

/// `(temperature, intensity)` grid; one intensity series per temperature.
///
/// With `g_s = γ = 1` the largest intensity puts the peak `Δ` at the
/// continuous-pump threshold `√(γ_i γ_s)/2`.
pub fn fig3_axes() -> Vec<AxisSpec> {
    vec![
        AxisSpec::linear(AxisName::Temperature, 0.0, 40.0, 5),
        AxisSpec::log(AxisName::Intensity, 1e-3, 0.5, 7),
    ]
}

pub fn fig3_default_config() -> RunConfig {
    RunConfig {
        mode: Mode::Numeric,
        physics: PhysicsConfig {
            gamma_i: 1.0,
            gamma_s: 1.0,
            delta: None,
            g_s: Some(1.0),
            pump_amplitude: Some(0.1),
            cavity: None,
            n_b: 0.0,
            temperature: 0.0,
            omega_i: 0.0,
            photoluminescence: PhotoluminescenceModel::default(),
        },
        drive: DriveConfig {
            envelope: PumpEnvelope::Gaussian {
                t0: 4.0,
                sigma: 1.0,
            },
            omega_p: 0.0,
        },
        detection: DetectionConfig::default(),
        sweep: fig3_axes(),
        output: OutputConfig::default(),
        tolerances: ToleranceConfig::default(),
    }
}

/// Entanglement weight over `(Δ, n_b)`; the default axes are used when the
/// config lists none.
pub fn sweep_fig2(config: &RunConfig) -> Result<SweepResult> {
    let mut config = config.clone();
    if config.sweep.is_empty() {
        config.sweep = fig2_axes();
    }
    if !matches!(config.drive.envelope, PumpEnvelope::Continuous) {
        return Err(Error::Config("sweep-fig2 needs a continuous drive".into()));
    }
    run_sweep(&config)
}

/// Entanglement weight over pump intensity and temperature for a pulsed
/// drive, evaluated numerically.
pub fn sweep_fig3(config: &RunConfig) -> Result<SweepResult> {
    let mut config = config.clone();
    if config.sweep.is_empty() {
        config.sweep = fig3_axes();
    }
    if matches!(config.drive.envelope, PumpEnvelope::Continuous) {
        return Err(Error::Config("sweep-fig3 needs a pulsed drive".into()));
    }
    if config.mode != Mode::Numeric {
        return Err(Error::Config("sweep-fig3 runs in numeric mode".into()));
    }
    run_sweep(&config)
}
