// SPDX-License-Identifier: Apache-2.0

//! JSON run configuration.
//!
//! Every section except `physics` has defaults. Unknown keys are rejected
//! at every level.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    Frame, NoiseModel, PhotoluminescenceModel, SignalIdlerModes, SignalIdlerSystem, Tolerance,
};
use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};
use crate::model::{CavityParams, EffectiveCoupling, PumpDrive, PumpEnvelope};
use crate::tomography::FitOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Closed-form long-time moments (continuous pump only).
    #[default]
    Analytic,
    /// Moment propagation and two-time tomography.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Cavity parameters at the idler, signal and pump wave vectors, from which
/// `g_s` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityCoupling {
    pub idler: CavityParams,
    pub signal: CavityParams,
    pub pump: CavityParams,
}

/// Physical parameters.
///
/// The parametric rate is given either directly as `delta`, or as `g_s`
/// (explicit or from `cavity`) together with `pump_amplitude`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    pub gamma_i: f64,
    pub gamma_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pump_amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity: Option<CavityCoupling>,
    #[serde(default)]
    pub n_b: f64,
    /// Reservoir temperature (K).
    #[serde(default)]
    pub temperature: f64,
    /// Idler frequency (rad/ps).
    #[serde(default)]
    pub omega_i: f64,
    #[serde(default)]
    pub photoluminescence: PhotoluminescenceModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    #[serde(default)]
    pub envelope: PumpEnvelope,
    /// Pump carrier frequency (rad/ps).
    #[serde(default)]
    pub omega_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionConfig {
    /// Detection window `T_d` (ps).
    #[serde(default = "default_window")]
    pub window_ps: f64,
    /// Two-time grid step (ps).
    #[serde(default = "default_step")]
    pub step_ps: f64,
}

fn default_window() -> f64 {
    120.0
}

fn default_step() -> f64 {
    0.25
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            window_ps: default_window(),
            step_ps: default_step(),
        }
    }
}

/// Parameters a sweep axis may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    /// Peak parametric rate; rescales `g_s` at fixed pump amplitude.
    Delta,
    #[serde(rename = "n_b")]
    NB,
    /// Peak pump occupation `𝒫̄²`.
    Intensity,
    Temperature,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::Delta => "delta",
            AxisName::NB => "n_b",
            AxisName::Intensity => "intensity",
            AxisName::Temperature => "temperature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub name: AxisName,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl AxisSpec {
    pub fn linear(name: AxisName, start: f64, stop: f64, count: usize) -> Self {
        Self {
            name,
            start,
            stop,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(name: AxisName, start: f64, stop: f64, count: usize) -> Self {
        Self {
            name,
            start,
            stop,
            count,
            spacing: Spacing::Log,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Config(format!(
                "sweep axis `{}`: count must be >= 1",
                self.name.as_str()
            )));
        }
        ensure_finite("sweep start", self.start)?;
        ensure_finite("sweep stop", self.stop)?;
        if self.spacing == Spacing::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(Error::Config(format!(
                "sweep axis `{}`: log spacing needs positive start and stop",
                self.name.as_str()
            )));
        }
        Ok(())
    }

    /// Grid values; endpoints are reproduced exactly.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k == self.count - 1 {
                    return self.stop;
                }
                let u = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * u,
                    Spacing::Log => self.start * (self.stop / self.start).powf(u),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Destination file; standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    #[serde(default = "default_atol")]
    pub atol: f64,
    /// Largest accepted relative residual of the W/identity fit.
    #[serde(default = "default_fit_residual")]
    pub fit_residual: f64,
    /// Slack on the fitted weight before clamping to `[0, 1]`.
    #[serde(default = "default_weight_range")]
    pub weight_range: f64,
    /// Continuous numeric runs integrate until transients have decayed by
    /// this many decades.
    #[serde(default = "default_decades")]
    pub relaxation_decades: f64,
}

fn default_rtol() -> f64 {
    Tolerance::default().rtol
}

fn default_atol() -> f64 {
    Tolerance::default().atol
}

fn default_fit_residual() -> f64 {
    FitOptions::default().max_relative_residual
}

fn default_weight_range() -> f64 {
    FitOptions::default().range_tolerance
}

fn default_decades() -> f64 {
    12.0
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rtol: default_rtol(),
            atol: default_atol(),
            fit_residual: default_fit_residual(),
            weight_range: default_weight_range(),
            relaxation_decades: default_decades(),
        }
    }
}

impl ToleranceConfig {
    pub fn integrator(&self) -> Tolerance {
        Tolerance {
            rtol: self.rtol,
            atol: self.atol,
        }
    }

    pub fn fit(&self) -> FitOptions {
        FitOptions {
            max_relative_residual: self.fit_residual,
            range_tolerance: self.weight_range,
        }
    }

    fn validate(&self) -> Result<()> {
        ensure_positive("tolerances.rtol", self.rtol)?;
        ensure_positive("tolerances.atol", self.atol)?;
        ensure_positive("tolerances.fit_residual", self.fit_residual)?;
        ensure_non_negative("tolerances.weight_range", self.weight_range)?;
        ensure_positive("tolerances.relaxation_decades", self.relaxation_decades)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mode: Mode,
    pub physics: PhysicsConfig,
    #[serde(default)]
    pub drive: DriveConfig,
    #[serde(default)]
    pub detection: DetectionConfig,
    #[serde(default)]
    pub sweep: Vec<AxisSpec>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
}

/// Fully resolved point in parameter space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointParams {
    pub gamma_i: f64,
    pub gamma_s: f64,
    pub g_s: f64,
    /// Peak pump occupation `𝒫̄²`.
    pub intensity: f64,
    pub n_b: f64,
    pub temperature: f64,
    pub omega_i: f64,
    pub photoluminescence: PhotoluminescenceModel,
    pub envelope: PumpEnvelope,
    pub omega_p: f64,
}

impl PointParams {
    /// Peak `Δ = g_s 𝒫̄²`.
    pub fn delta(&self) -> f64 {
        self.g_s * self.intensity
    }

    /// Peak pump amplitude `𝒫̄`.
    pub fn amplitude(&self) -> f64 {
        self.intensity.sqrt()
    }

    pub fn set(&mut self, axis: AxisName, value: f64) -> Result<()> {
        match axis {
            AxisName::Delta => {
                ensure_non_negative("delta", value)?;
                if self.intensity <= 0.0 {
                    return Err(Error::Config(
                        "sweeping delta needs a non-zero pump amplitude".into(),
                    ));
                }
                self.g_s = value / self.intensity;
            }
            AxisName::NB => {
                ensure_non_negative("n_b", value)?;
                self.n_b = value;
            }
            AxisName::Intensity => {
                ensure_non_negative("intensity", value)?;
                self.intensity = value;
            }
            AxisName::Temperature => {
                ensure_non_negative("temperature", value)?;
                self.temperature = value;
            }
        }
        Ok(())
    }

    pub fn drive(&self) -> PumpDrive {
        PumpDrive {
            envelope: self.envelope,
            amplitude: self.amplitude(),
            omega_p: self.omega_p,
        }
    }

    pub fn noise(&self) -> NoiseModel {
        NoiseModel {
            n_b: self.n_b,
            temperature: self.temperature,
            photoluminescence: Some(self.photoluminescence),
        }
    }

    /// Total reservoir occupation under a continuous pump.
    pub fn continuous_occupation(&self) -> f64 {
        self.noise().occupation(self.intensity)
    }

    pub fn system(&self) -> SignalIdlerSystem {
        SignalIdlerSystem {
            modes: SignalIdlerModes::resonant(
                self.omega_i,
                self.omega_p,
                self.gamma_i,
                self.gamma_s,
            ),
            g_s: self.g_s,
            drive: self.drive(),
            noise: self.noise(),
            frame: Frame::Rotating,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("gamma_i", self.gamma_i)?;
        ensure_positive("gamma_s", self.gamma_s)?;
        ensure_non_negative("g_s", self.g_s)?;
        ensure_finite("omega_i", self.omega_i)?;
        self.system().validate()
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("detection.window_ps", self.detection.window_ps)?;
        ensure_positive("detection.step_ps", self.detection.step_ps)?;
        if self.detection.step_ps > self.detection.window_ps {
            return Err(Error::Config(
                "detection.step_ps exceeds detection.window_ps".into(),
            ));
        }
        self.tolerances.validate()?;
        for (k, axis) in self.sweep.iter().enumerate() {
            axis.validate()?;
            if self.sweep[..k].iter().any(|a| a.name == axis.name) {
                return Err(Error::Config(format!(
                    "sweep axis `{}` listed twice",
                    axis.name.as_str()
                )));
            }
        }
        if self.mode == Mode::Analytic && !matches!(self.drive.envelope, PumpEnvelope::Continuous) {
            return Err(Error::Config(
                "analytic mode needs a continuous drive; use \"mode\": \"numeric\" for pulses"
                    .into(),
            ));
        }
        self.base_point()?.validate()
    }

    /// The configured point before any sweep axis is applied.
    pub fn base_point(&self) -> Result<PointParams> {
        let p = &self.physics;
        let (g_s, amplitude) = match (p.delta, p.g_s, p.cavity, p.pump_amplitude) {
            (Some(delta), None, None, None) => (delta, 1.0),
            (Some(_), _, _, _) => {
                return Err(Error::Config(
                    "physics: give either `delta` or (`g_s` | `cavity`) with `pump_amplitude`, not both"
                        .into(),
                ))
            }
            (None, Some(_), Some(_), _) => {
                return Err(Error::Config(
                    "physics: `g_s` and `cavity` are mutually exclusive".into(),
                ))
            }
            (None, Some(g_s), None, Some(a)) => (g_s, a),
            (None, None, Some(cavity), Some(a)) => {
                cavity.idler.validate()?;
                cavity.signal.validate()?;
                cavity.pump.validate()?;
                let c = EffectiveCoupling::from_cavity(&cavity.idler, &cavity.signal, &cavity.pump, a);
                (c.g_s, a)
            }
            (None, Some(_), None, None) | (None, None, Some(_), None) => {
                return Err(Error::Config(
                    "physics: `pump_amplitude` is required with `g_s` or `cavity`".into(),
                ))
            }
            (None, None, None, _) => {
                return Err(Error::Config(
                    "physics: missing coupling; set `delta`, or `g_s`/`cavity` with `pump_amplitude`"
                        .into(),
                ))
            }
        };
        ensure_non_negative("pump_amplitude", amplitude)?;
        Ok(PointParams {
            gamma_i: p.gamma_i,
            gamma_s: p.gamma_s,
            g_s,
            intensity: amplitude * amplitude,
            n_b: p.n_b,
            temperature: p.temperature,
            omega_i: p.omega_i,
            photoluminescence: p.photoluminescence,
            envelope: self.drive.envelope,
            omega_p: self.drive.omega_p,
        })
    }
}
