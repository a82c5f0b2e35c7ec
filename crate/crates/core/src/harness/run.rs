// SPDX-License-Identifier: Apache-2.0

//! Evaluation of a single parameter point.

use serde::{Deserialize, Serialize};

use crate::analytic::{steady_moments, STABILITY_GUARD};
use crate::dynamics::{propagate_moments, relaxation_horizon, stability_check, MomentState};
use crate::error::{Error, Result};
use crate::model::PumpEnvelope;
use crate::tomography::{
    fit_w_mixture, reconstruct_rho, trapezoid_weights, window_correlators, CorrelatorGrid,
    DensityMatrix4, WMixture,
};
use crate::{c64, C64, N_SIGNALS};

use super::config::{DetectionConfig, Mode, PointParams, RunConfig, ToleranceConfig};

/// Output columns, in emission order.
pub const COLUMNS: [&str; 11] = [
    "delta",
    "n_b",
    "intensity",
    "temperature",
    "x",
    "residual",
    "n_ii",
    "n_ss",
    "n_ssp",
    "abs_n_is",
    "stability_margin",
];

/// One output record.
///
/// For continuous drives the moment columns are long-time values; for
/// pulsed drives they are integrated over the detection window. Fields are
/// `None` when the continuous-pump steady state does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRow {
    pub delta: f64,
    pub n_b: f64,
    pub intensity: f64,
    pub temperature: f64,
    pub x: Option<f64>,
    pub residual: Option<f64>,
    pub n_ii: Option<f64>,
    pub n_ss: Option<f64>,
    pub n_ssp: Option<f64>,
    pub abs_n_is: Option<f64>,
    /// `γ_i γ_s − 4Δ²` at the peak `Δ`.
    pub stability_margin: f64,
}

impl SweepRow {
    fn blank(p: &PointParams, margin: f64) -> Self {
        Self {
            delta: p.delta(),
            n_b: p.n_b,
            intensity: p.intensity,
            temperature: p.temperature,
            x: None,
            residual: None,
            n_ii: None,
            n_ss: None,
            n_ssp: None,
            abs_n_is: None,
            stability_margin: margin,
        }
    }

    /// Numeric columns in [`COLUMNS`] order.
    pub fn values(&self) -> [Option<f64>; 11] {
        [
            Some(self.delta),
            Some(self.n_b),
            Some(self.intensity),
            Some(self.temperature),
            self.x,
            self.residual,
            self.n_ii,
            self.n_ss,
            self.n_ssp,
            self.abs_n_is,
            Some(self.stability_margin),
        ]
    }
}

/// Full result of one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub row: SweepRow,
    pub rho: DensityMatrix4,
    pub mixture: WMixture,
}

struct Summary {
    n_ii: f64,
    n_ss: f64,
    n_ssp: f64,
    n_is: C64,
}

fn summarize_block(n_ii: f64, block: &crate::Mat4, pair: &[C64; N_SIGNALS]) -> Summary {
    let mut diag = 0.0;
    let mut off = 0.0;
    for a in 0..N_SIGNALS {
        for b in 0..N_SIGNALS {
            if a == b {
                diag += block[(a, b)].re;
            } else {
                off += block[(a, b)].re;
            }
        }
    }
    let n = N_SIGNALS as f64;
    Summary {
        n_ii,
        n_ss: diag / n,
        n_ssp: off / (n * (n - 1.0)),
        n_is: pair.iter().sum::<C64>() / c64(n, 0.0),
    }
}

/// Window-integrated equal-time moments.
fn integrate_grid(grid: &CorrelatorGrid) -> Summary {
    let w = trapezoid_weights(&grid.times);
    let n_ii = w
        .iter()
        .zip(&grid.idler_population)
        .map(|(w, v)| w * v)
        .sum();
    let block = w
        .iter()
        .zip(&grid.signal_block)
        .fold(crate::Mat4::zeros(), |acc, (w, s)| acc + s * c64(*w, 0.0));
    let mut pair = [c64(0.0, 0.0); N_SIGNALS];
    for (k, wk) in w.iter().enumerate() {
        for (acc, c) in pair.iter_mut().zip(grid.pair(k, k)) {
            *acc += c * wk;
        }
    }
    summarize_block(n_ii, &block, &pair)
}

fn finish(
    p: &PointParams,
    margin: f64,
    grid: &CorrelatorGrid,
    summary: Summary,
    tol: &ToleranceConfig,
) -> Result<PointResult> {
    let rho = reconstruct_rho(grid)?;
    let mixture = fit_w_mixture(&rho, &tol.fit())?;
    let row = SweepRow {
        x: Some(mixture.x_weight),
        residual: Some(mixture.residual),
        n_ii: Some(summary.n_ii),
        n_ss: Some(summary.n_ss),
        n_ssp: Some(summary.n_ssp),
        abs_n_is: Some(summary.n_is.norm()),
        ..SweepRow::blank(p, margin)
    };
    Ok(PointResult { row, rho, mixture })
}

/// Evaluates one point. A continuous drive outside the stability region is
/// an [`Error::Unstable`].
pub fn evaluate_point(
    p: &PointParams,
    mode: Mode,
    detection: &DetectionConfig,
    tol: &ToleranceConfig,
) -> Result<PointResult> {
    p.validate()?;
    let delta = p.delta();
    let margin = stability_check(p.gamma_i, p.gamma_s, delta)?.margin;
    let continuous = matches!(p.envelope, PumpEnvelope::Continuous);
    if continuous && margin <= STABILITY_GUARD {
        return Err(Error::Unstable {
            margin,
            guard: STABILITY_GUARD,
        });
    }
    match (mode, continuous) {
        (Mode::Analytic, true) => {
            let m = steady_moments(p.gamma_i, p.gamma_s, delta, p.continuous_occupation())?;
            let grid = CorrelatorGrid::from_steady(&m);
            let summary = Summary {
                n_ii: m.n_ii,
                n_ss: m.n_ss,
                n_ssp: m.n_ssp,
                n_is: m.n_is,
            };
            finish(p, margin, &grid, summary, tol)
        }
        (Mode::Analytic, false) => Err(Error::Config(
            "analytic mode needs a continuous drive".into(),
        )),
        (Mode::Numeric, true) => {
            let horizon = relaxation_horizon(p.gamma_i, p.gamma_s, delta, tol.relaxation_decades);
            let system = p.system();
            let start = MomentState::vacuum(0.0);
            let state = propagate_moments(&start, &system, &[horizon], tol.integrator())?
                .pop()
                .expect("one output time");
            let grid = CorrelatorGrid::stationary(&state)?;
            let summary = summarize_block(
                grid.idler_population[0],
                &grid.signal_block[0],
                grid.pair(0, 0),
            );
            finish(p, margin, &grid, summary, tol)
        }
        (Mode::Numeric, false) => {
            let grid = window_correlators(
                &p.system(),
                detection.window_ps,
                detection.step_ps,
                tol.integrator(),
            )?;
            let summary = integrate_grid(&grid);
            finish(p, margin, &grid, summary, tol)
        }
    }
}

/// Evaluates a point for a sweep: an unstable continuous point yields a row
/// with blank results instead of an error.
pub fn evaluate_row(
    p: &PointParams,
    mode: Mode,
    detection: &DetectionConfig,
    tol: &ToleranceConfig,
) -> Result<SweepRow> {
    match evaluate_point(p, mode, detection, tol) {
        Ok(r) => Ok(r.row),
        Err(Error::Unstable { margin, .. }) => Ok(SweepRow::blank(p, margin)),
        Err(e) => Err(e),
    }
}

/// Evaluates the configured point, ignoring any sweep axes.
pub fn run_single(config: &RunConfig) -> Result<PointResult> {
    config.validate()?;
    let p = config.base_point()?;
    evaluate_point(&p, config.mode, &config.detection, &config.tolerances)
}
