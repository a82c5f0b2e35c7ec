// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Result};
use crate::model::{pump_amplitude, PumpDrive};
use crate::{c64, Mat5, C64, N_MODES};

use super::noise::{diffusion_matrix, Diffusion, NoiseModel};

/// Frequencies and half damping rates `γ = Γ^(tot)/2` of the idler and the
/// (degenerate) signal modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalIdlerModes {
    pub omega_i: f64,
    pub omega_s: f64,
    pub gamma_i: f64,
    pub gamma_s: f64,
}

impl SignalIdlerModes {
    /// Modes with the signal frequency fixed by energy conservation,
    /// `ω_s = 2ω_p − ω_i`.
    pub fn resonant(omega_i: f64, omega_p: f64, gamma_i: f64, gamma_s: f64) -> Self {
        Self {
            omega_i,
            omega_s: 2.0 * omega_p - omega_i,
            gamma_i,
            gamma_s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("omega_i", self.omega_i)?;
        ensure_finite("omega_s", self.omega_s)?;
        ensure_positive("gamma_i", self.gamma_i)?;
        ensure_positive("gamma_s", self.gamma_s)
    }

    /// `ω_i + ω_s − 2ω_p`; zero for a phase-matched process.
    pub fn energy_mismatch(&self, omega_p: f64) -> f64 {
        self.omega_i + self.omega_s - 2.0 * omega_p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Lab,
    /// Signal slots demodulated by `e^{-2iω_p t}`.
    Rotating,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    pub matrix: Mat5,
    pub frame: Frame,
}

/// Builds the drift matrix at time `t`.
///
/// Lab frame:
/// `M_00 = -iω_i - γ_i`, `M_ss = iω_s - γ_s`, `M_0s = -i g_s 𝒫²`,
/// `M_s0 = i g_s (𝒫*)²`.
///
/// Rotating frame: `T M T⁻¹ + Ṫ T⁻¹` with `T = diag(1, e^{-2iω_p t}, …)`,
/// which for a real envelope is `[[-γ_i, -iΔ…], [iΔ, -γ_s]] - iω_i I` with
/// `Δ(t) = g_s 𝒫̄² f(t)²`. A nonzero energy mismatch shows up as `+iδ` on
/// the signal diagonal.
pub fn build_drift(
    g_s: f64,
    modes: &SignalIdlerModes,
    drive: &PumpDrive,
    t: f64,
    frame: Frame,
) -> Result<DriftMatrix> {
    ensure_finite("g_s", g_s)?;
    ensure_finite("t", t)?;
    modes.validate()?;
    drive.validate()?;
    let pump = match frame {
        Frame::Lab => pump_amplitude(drive, t),
        Frame::Rotating => c64(drive.envelope_at(t), 0.0),
    };
    let matrix = drift_from_pump(g_s, modes, drive.omega_p, pump, frame);
    Ok(DriftMatrix { matrix, frame })
}

fn drift_from_pump(
    g_s: f64,
    modes: &SignalIdlerModes,
    omega_p: f64,
    pump: C64,
    frame: Frame,
) -> Mat5 {
    let i = c64(0.0, 1.0);
    let p2 = pump * pump;
    let upper = -i * g_s * p2;
    let lower = i * g_s * p2.conj();
    let (idler_diag, signal_diag) = match frame {
        Frame::Lab => (
            c64(-modes.gamma_i, -modes.omega_i),
            c64(-modes.gamma_s, modes.omega_s),
        ),
        Frame::Rotating => (
            c64(-modes.gamma_i, -modes.omega_i),
            c64(
                -modes.gamma_s,
                -modes.omega_i + modes.energy_mismatch(omega_p),
            ),
        ),
    };
    let mut m = Mat5::zeros();
    m[(0, 0)] = idler_diag;
    for s in 1..N_MODES {
        m[(0, s)] = upper;
        m[(s, 0)] = lower;
        m[(s, s)] = signal_diag;
    }
    m
}

/// A time-dependent drift `M(t) = M_r(t) - iω I`, split into a slowly varying
/// part and a scalar carrier that is applied analytically.
pub trait DriftSource: Sync {
    /// `M(t) + iω I`.
    fn reduced_drift(&self, t: f64) -> Mat5;

    /// Scalar carrier `ω` (rad/ps) removed from the diagonal.
    fn carrier(&self) -> f64 {
        0.0
    }

    fn drift(&self, t: f64) -> Mat5 {
        self.reduced_drift(t) - Mat5::identity() * c64(0.0, self.carrier())
    }

    /// True when the drift does not depend on time.
    fn is_stationary(&self) -> bool {
        false
    }
}

impl DriftSource for Mat5 {
    fn reduced_drift(&self, _t: f64) -> Mat5 {
        *self
    }

    fn is_stationary(&self) -> bool {
        true
    }
}

/// The pumped five-mode system with its reservoirs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalIdlerSystem {
    pub modes: SignalIdlerModes,
    pub g_s: f64,
    pub drive: PumpDrive,
    pub noise: NoiseModel,
    pub frame: Frame,
}

impl SignalIdlerSystem {
    /// Continuous pump in the rotating frame with `Δ` given directly
    /// (`𝒫̄ = 1`, `g_s = Δ`, phase-matched signal frequency).
    pub fn continuous(gamma_i: f64, gamma_s: f64, delta: f64, omega_i: f64, n_b: f64) -> Self {
        let drive = PumpDrive::continuous(1.0, 0.0);
        Self {
            modes: SignalIdlerModes::resonant(omega_i, drive.omega_p, gamma_i, gamma_s),
            g_s: delta,
            drive,
            noise: NoiseModel::uniform(n_b),
            frame: Frame::Rotating,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.modes.validate()?;
        self.drive.validate()?;
        ensure_finite("g_s", self.g_s)?;
        self.noise.validate()
    }

    /// Instantaneous `Δ(t) = g_s |𝒫(t)|²`.
    pub fn delta_at(&self, t: f64) -> f64 {
        self.g_s * self.drive.occupation_at(t)
    }

    /// Peak `Δ` over the drive.
    pub fn peak_delta(&self) -> f64 {
        self.g_s * self.drive.amplitude * self.drive.amplitude
    }

    pub fn diffusion_at(&self, t: f64) -> Diffusion {
        diffusion_matrix(
            &self.noise,
            self.modes.gamma_i,
            self.modes.gamma_s,
            self.drive.occupation_at(t),
        )
    }
}

impl DriftSource for SignalIdlerSystem {
    fn reduced_drift(&self, t: f64) -> Mat5 {
        let pump = match self.frame {
            Frame::Lab => pump_amplitude(&self.drive, t),
            Frame::Rotating => c64(self.drive.envelope_at(t), 0.0),
        };
        let m = drift_from_pump(self.g_s, &self.modes, self.drive.omega_p, pump, self.frame);
        m + Mat5::identity() * c64(0.0, self.carrier())
    }

    fn carrier(&self) -> f64 {
        match self.frame {
            Frame::Lab => 0.0,
            Frame::Rotating => self.modes.omega_i,
        }
    }

    fn is_stationary(&self) -> bool {
        self.frame == Frame::Rotating && self.drive.is_continuous()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    pub stable: bool,
    /// `γ_i γ_s − 4Δ²`.
    pub margin: f64,
}

/// Continuous-pump steady state exists iff `γ_i γ_s > 4Δ²`.
pub fn stability_check(gamma_i: f64, gamma_s: f64, delta: f64) -> Result<Stability> {
    ensure_positive("gamma_i", gamma_i)?;
    ensure_positive("gamma_s", gamma_s)?;
    ensure_non_negative("delta", delta.abs())?;
    let margin = gamma_i * gamma_s - 4.0 * delta * delta;
    Ok(Stability {
        stable: margin > 0.0,
        margin,
    })
}
