// SPDX-License-Identifier: Apache-2.0

//! Reservoir statistics of the Langevin forces.
//!
//! `⟨F†_x(t) F_y(t')⟩ = n Γ_x δ_xy δ(t−t')`,
//! `⟨F_x(t) F†_y(t')⟩ = (n + 1) Γ_x δ_xy δ(t−t')`, anomalous correlators zero,
//! with `Γ_x = 2γ_x`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_non_negative, Result};
use crate::{c64, Mat5, N_MODES};

/// k_B in meV/K.
pub const BOLTZMANN_MEV_PER_K: f64 = 8.617_333_262e-2;

/// Pump-induced photoluminescence background.
///
/// Occupation `strength · exp(−E_a / k_B T) · n_p²` with `n_p = |𝒫(t)|²`.
/// Quadratic in the pump occupation (pump-pump scattering into the
/// reservoir), thermally activated with a single energy. The default values
/// are illustrative model units, not material constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhotoluminescenceModel {
    pub strength: f64,
    pub activation_energy_mev: f64,
}

impl Default for PhotoluminescenceModel {
    fn default() -> Self {
        Self {
            strength: 1.0,
            activation_energy_mev: 2.0,
        }
    }
}

impl PhotoluminescenceModel {
    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("photoluminescence.strength", self.strength)?;
        ensure_non_negative(
            "photoluminescence.activation_energy_mev",
            self.activation_energy_mev,
        )
    }

    /// `exp(−E_a / k_B T)`; zero at `T = 0`.
    pub fn thermal_factor(&self, temperature: f64) -> f64 {
        if temperature <= 0.0 {
            0.0
        } else {
            (-self.activation_energy_mev / (BOLTZMANN_MEV_PER_K * temperature)).exp()
        }
    }

    pub fn occupation(&self, pump_occupation: f64, temperature: f64) -> f64 {
        self.strength * self.thermal_factor(temperature) * pump_occupation * pump_occupation
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Uniform background occupation `N_b`.
    pub n_b: f64,
    /// Reservoir temperature (K).
    pub temperature: f64,
    pub photoluminescence: Option<PhotoluminescenceModel>,
}

impl NoiseModel {
    pub fn uniform(n_b: f64) -> Self {
        Self {
            n_b,
            temperature: 0.0,
            photoluminescence: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("n_b", self.n_b)?;
        ensure_non_negative("temperature", self.temperature)?;
        ensure_finite("temperature", self.temperature)?;
        if let Some(pl) = &self.photoluminescence {
            pl.validate()?;
        }
        Ok(())
    }

    /// Total reservoir occupation seen by every mode.
    pub fn occupation(&self, pump_occupation: f64) -> f64 {
        self.n_b
            + self
                .photoluminescence
                .map_or(0.0, |pl| pl.occupation(pump_occupation, self.temperature))
    }
}

/// Noise correlators in the physical basis `(i, s1, …, s4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diffusion {
    /// `⟨F† F⟩` coefficients.
    pub normal: Mat5,
    /// `⟨F F†⟩` coefficients.
    pub anti_normal: Mat5,
}

impl Diffusion {
    /// `⟨F_a† F_b⟩` for the doubled basis `(p_i, p_s†…)`: normal-ordered on the
    /// idler slot, anti-normal on the signal slots.
    pub fn doubled(&self) -> Mat5 {
        let mut d = self.anti_normal;
        d[(0, 0)] = self.normal[(0, 0)];
        d
    }
}

pub fn diffusion_matrix(
    noise: &NoiseModel,
    gamma_i: f64,
    gamma_s: f64,
    pump_occupation: f64,
) -> Diffusion {
    let n = noise.occupation(pump_occupation);
    let mut normal = Mat5::zeros();
    let mut anti_normal = Mat5::zeros();
    for x in 0..N_MODES {
        let big_gamma = 2.0 * if x == 0 { gamma_i } else { gamma_s };
        normal[(x, x)] = c64(n * big_gamma, 0.0);
        anti_normal[(x, x)] = c64((n + 1.0) * big_gamma, 0.0);
    }
    Diffusion {
        normal,
        anti_normal,
    }
}
