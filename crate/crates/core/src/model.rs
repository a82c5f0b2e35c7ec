// SPDX-License-Identifier: Apache-2.0

//! Linear polariton model, pump geometry and the parametric coupling.
//!
//! Mode frequencies enter as plain numbers at the nine wave vectors that
//! matter (four pumps, four signals, one idler). [`ParabolicDispersion`] is a
//! convenience for producing them from a simple band model.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};
use crate::{c64, C64};

/// Bare cavity/exciton parameters at a single in-plane wave vector, together
/// with the nonlinear couplings shared by all wave vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityParams {
    /// Cavity photon frequency (rad/ps).
    pub omega_c: f64,
    /// Exciton frequency (rad/ps).
    pub omega_x: f64,
    /// Rabi frequency (rad/ps).
    pub omega_r: f64,
    /// Exciton saturation density, in the same normalization as the pump amplitude.
    pub n_sat: f64,
    /// Exciton-exciton coupling (rad/ps per unit density).
    pub v_xx: f64,
}

impl CavityParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("omega_c", self.omega_c)?;
        ensure_positive("omega_x", self.omega_x)?;
        ensure_positive("omega_r", self.omega_r)?;
        ensure_positive("n_sat", self.n_sat)?;
        ensure_finite("v_xx", self.v_xx)
    }
}

/// Lower/upper polariton branches at one wave vector.
///
/// The lower polariton is `p_1 = x_coeff * b + c_coeff * a`; the upper one is
/// `p_2 = c_coeff * b - x_coeff * a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfieldModes {
    pub omega_lower: f64,
    pub omega_upper: f64,
    pub x_coeff: f64,
    pub c_coeff: f64,
}

impl HopfieldModes {
    /// Rebuilds `(omega_c, omega_x, omega_r)` from the branch energies and
    /// coefficients.
    pub fn reassemble(&self) -> (f64, f64, f64) {
        let (x2, c2) = (self.x_coeff * self.x_coeff, self.c_coeff * self.c_coeff);
        let omega_x = x2 * self.omega_lower + c2 * self.omega_upper;
        let omega_c = c2 * self.omega_lower + x2 * self.omega_upper;
        let omega_r = self.x_coeff * self.c_coeff * (self.omega_upper - self.omega_lower);
        (omega_c, omega_x, omega_r)
    }
}

/// Diagonalizes the linear exciton-photon dynamics
/// `d/dt (b, a) = -i [[ω_x, -Ω_R], [-Ω_R, ω_c]] (b, a)`.
pub fn hopfield_diagonalize(params: &CavityParams) -> HopfieldModes {
    let mean = 0.5 * (params.omega_c + params.omega_x);
    let half_detuning = 0.5 * (params.omega_c - params.omega_x);
    let split = half_detuning.hypot(params.omega_r);
    let ratio = half_detuning / split;
    // x*c = Ω_R / (2 * split); take the larger coefficient from the square
    // root and the smaller one from the product.
    let (x_coeff, c_coeff) = if ratio >= 0.0 {
        let x = (0.5 * (1.0 + ratio)).sqrt();
        (x, params.omega_r / (2.0 * split * x))
    } else {
        let c = (0.5 * (1.0 - ratio)).sqrt();
        (params.omega_r / (2.0 * split * c), c)
    };
    HopfieldModes {
        omega_lower: mean - split,
        omega_upper: mean + split,
        x_coeff,
        c_coeff,
    }
}

/// Parabolic photon band over a flat exciton band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParabolicDispersion {
    /// Photon frequency at k = 0 (rad/ps).
    pub omega_c0: f64,
    /// Band curvature (rad/ps · µm²).
    pub curvature: f64,
    /// Exciton frequency (rad/ps).
    pub omega_x: f64,
    pub omega_r: f64,
    pub n_sat: f64,
    pub v_xx: f64,
}

impl ParabolicDispersion {
    /// Cavity parameters at wave-vector magnitude `k` (1/µm).
    pub fn at(&self, k: f64) -> CavityParams {
        CavityParams {
            omega_c: self.omega_c0 + self.curvature * k * k,
            omega_x: self.omega_x,
            omega_r: self.omega_r,
            n_sat: self.n_sat,
            v_xx: self.v_xx,
        }
    }
}

/// `g_s = 2 X_i X_s X_p (Ω_R / n_sat · C_p + V_xx X_p)`.
pub fn coupling_gs(x_i: f64, x_s: f64, x_p: f64, c_p: f64, params: &CavityParams) -> f64 {
    2.0 * x_i * x_s * x_p * (params.omega_r / params.n_sat * c_p + params.v_xx * x_p)
}

/// Parametric coupling and the derived rate `Δ = g_s 𝒫̄²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveCoupling {
    pub g_s: f64,
    pub delta: f64,
}

impl EffectiveCoupling {
    pub fn new(g_s: f64, amplitude: f64) -> Self {
        Self {
            g_s,
            delta: g_s * amplitude * amplitude,
        }
    }

    /// Coupling that reproduces a given `Δ` at unit pump amplitude.
    pub fn from_delta(delta: f64) -> Self {
        Self { g_s: delta, delta }
    }

    /// Evaluates `g_s` from the cavity parameters at the idler, signal and pump
    /// wave vectors (all lower-branch coefficients).
    pub fn from_cavity(
        idler: &CavityParams,
        signal: &CavityParams,
        pump: &CavityParams,
        amplitude: f64,
    ) -> Self {
        let (hi, hs, hp) = (
            hopfield_diagonalize(idler),
            hopfield_diagonalize(signal),
            hopfield_diagonalize(pump),
        );
        let g_s = coupling_gs(hi.x_coeff, hs.x_coeff, hp.x_coeff, hp.c_coeff, pump);
        Self::new(g_s, amplitude)
    }
}

/// Temporal shape of the pump.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PumpEnvelope {
    #[default]
    Continuous,
    /// Gaussian amplitude envelope `exp(-(t - t0)² / (2σ²))`.
    Gaussian { t0: f64, sigma: f64 },
}

/// Classical pump field `𝒫(t)` common to all four pumps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpDrive {
    pub envelope: PumpEnvelope,
    /// Peak amplitude 𝒫̄ (dimensionless, real).
    pub amplitude: f64,
    /// Carrier frequency ω_p (rad/ps).
    pub omega_p: f64,
}

impl PumpDrive {
    pub fn continuous(amplitude: f64, omega_p: f64) -> Self {
        Self {
            envelope: PumpEnvelope::Continuous,
            amplitude,
            omega_p,
        }
    }

    pub fn gaussian(amplitude: f64, omega_p: f64, t0: f64, sigma: f64) -> Self {
        Self {
            envelope: PumpEnvelope::Gaussian { t0, sigma },
            amplitude,
            omega_p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("amplitude", self.amplitude)?;
        ensure_finite("omega_p", self.omega_p)?;
        if let PumpEnvelope::Gaussian { t0, sigma } = self.envelope {
            ensure_finite("t0", t0)?;
            ensure_positive("sigma", sigma)?;
        }
        Ok(())
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self.envelope, PumpEnvelope::Continuous)
    }

    /// Real slowly varying amplitude `𝒫̄ f(t)`.
    pub fn envelope_at(&self, t: f64) -> f64 {
        match self.envelope {
            PumpEnvelope::Continuous => self.amplitude,
            PumpEnvelope::Gaussian { t0, sigma } => {
                let u = (t - t0) / sigma;
                self.amplitude * (-0.5 * u * u).exp()
            }
        }
    }

    /// Pump occupation `|𝒫(t)|²`.
    pub fn occupation_at(&self, t: f64) -> f64 {
        let e = self.envelope_at(t);
        e * e
    }
}

/// Lab-frame pump amplitude `𝒫(t) = 𝒫̄ f(t) e^{-iω_p t}`.
pub fn pump_amplitude(drive: &PumpDrive, t: f64) -> C64 {
    let phase = -drive.omega_p * t;
    drive.envelope_at(t) * c64(phase.cos(), phase.sin())
}

/// In-plane wave vector (1/µm).
pub type KVector = [f64; 2];

/// Which output mode a pump pair scatters into, besides the shared idler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// Oppositely arranged pumps: total momentum zero, the idler itself.
    Idler,
    /// Neighbouring pumps: idler plus signal `n` (0-based).
    Signal(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringProcess {
    /// 0-based pump indices, `pair.0 < pair.1`.
    pub pair: (usize, usize),
    pub total_k: KVector,
    pub channel: Channel,
}

/// Four pumps on the corners of a square, four signals on the axes.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpGeometry {
    pub k_p: f64,
    pub pump_k: [KVector; 4],
    pub signal_k: [KVector; 4],
    pub idler_k: KVector,
}

impl PumpGeometry {
    pub fn square(k_p: f64) -> Self {
        Self {
            k_p,
            pump_k: [[k_p, k_p], [-k_p, k_p], [-k_p, -k_p], [k_p, -k_p]],
            signal_k: [
                [0.0, 2.0 * k_p],
                [-2.0 * k_p, 0.0],
                [0.0, -2.0 * k_p],
                [2.0 * k_p, 0.0],
            ],
            idler_k: [0.0, 0.0],
        }
    }
}

/// Lists the phase-matched two-pump processes and rejects any pump pair whose
/// total momentum lands on neither the idler nor one of the signals.
pub fn validate_geometry(geom: &PumpGeometry) -> Result<Vec<ScatteringProcess>> {
    ensure_positive("k_p", geom.k_p)?;
    let tol = 1e-12 * geom.k_p;
    let close = |a: KVector, b: KVector| (a[0] - b[0]).abs() <= tol && (a[1] - b[1]).abs() <= tol;

    for (n, s) in geom.signal_k.iter().enumerate() {
        let norm = s[0].hypot(s[1]);
        if (norm - 2.0 * geom.k_p).abs() > tol {
            return Err(Error::param(
                "signal_k",
                format!("signal {n} has |k| = {norm}, expected {}", 2.0 * geom.k_p),
            ));
        }
    }

    let mut processes = Vec::with_capacity(6);
    for n in 0..4 {
        for m in (n + 1)..4 {
            let (a, b) = (geom.pump_k[n], geom.pump_k[m]);
            let total = [a[0] + b[0], a[1] + b[1]];
            let channel = if close(total, geom.idler_k) {
                Channel::Idler
            } else {
                let rest = [total[0] - geom.idler_k[0], total[1] - geom.idler_k[1]];
                match geom.signal_k.iter().position(|&s| close(s, rest)) {
                    Some(idx) => Channel::Signal(idx),
                    None => {
                        return Err(Error::Geometry {
                            pair: (n, m),
                            total,
                        })
                    }
                }
            };
            processes.push(ScatteringProcess {
                pair: (n, m),
                total_k: total,
                channel,
            });
        }
    }
    Ok(processes)
}
