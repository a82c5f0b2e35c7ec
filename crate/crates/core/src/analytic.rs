// SPDX-License-Identifier: Apache-2.0

//! Closed-form continuous-pump results in the rotating frame: spectrum,
//! Green functions, long-time moments and the W weight.

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};
use crate::{c64, Mat5, C64};

/// Default guard band on `γ_i γ_s − 4Δ²`.
pub const STABILITY_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData {
    /// `Ω = √((γ_i − γ_s)² + 16Δ²)`.
    pub omega_cap: f64,
    /// `λ = −γ_s − iω_i`.
    pub lambda: C64,
    /// `λ₊ = (γ_i − γ_s + Ω)/2`.
    pub lambda_plus: f64,
    /// `λ₋ = (γ_i − γ_s − Ω)/2`.
    pub lambda_minus: f64,
    pub eigenvalues: [C64; 5],
}

pub fn spectral_data(gamma_i: f64, gamma_s: f64, delta: f64, omega_i: f64) -> Result<SpectralData> {
    ensure_positive("gamma_i", gamma_i)?;
    ensure_positive("gamma_s", gamma_s)?;
    ensure_non_negative("delta", delta)?;
    ensure_finite("omega_i", omega_i)?;
    let omega_cap = (gamma_i - gamma_s).hypot(4.0 * delta);
    let lambda = c64(-gamma_s, -omega_i);
    let sum = gamma_i + gamma_s;
    let l4 = c64(-0.5 * (sum + omega_cap), -omega_i);
    let l5 = c64(-0.5 * (sum - omega_cap), -omega_i);
    Ok(SpectralData {
        omega_cap,
        lambda,
        lambda_plus: 0.5 * (gamma_i - gamma_s + omega_cap),
        lambda_minus: 0.5 * (gamma_i - gamma_s - omega_cap),
        eigenvalues: [lambda, lambda, lambda, l4, l5],
    })
}

/// Green-function elements with the common factor `e^{λt}` stripped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenElements {
    pub g_ii: f64,
    pub g_is: C64,
    pub g_ss: f64,
    pub g_ssp: f64,
}

/// `sinh(Ωt/2)/Ω`, finite as `Ω → 0`.
fn sinh_over(omega: f64, t: f64) -> f64 {
    let x = 0.5 * omega * t;
    if x.abs() < 1e-4 {
        0.5 * t * (1.0 + x * x / 6.0)
    } else {
        x.sinh() / omega
    }
}

pub fn green_elements(gamma_i: f64, gamma_s: f64, delta: f64, t: f64) -> Result<GreenElements> {
    ensure_non_negative("t", t)?;
    let spec = spectral_data(gamma_i, gamma_s, delta, 0.0)?;
    let diff = gamma_i - gamma_s;
    let decay = (-0.5 * diff * t).exp();
    let ch = (0.5 * spec.omega_cap * t).cosh();
    let sh = sinh_over(spec.omega_cap, t);
    let g_ii = decay * (ch - diff * sh);
    let g_is = c64(0.0, -2.0 * delta * decay * sh);
    let g_ss = 0.75 + 0.25 * decay * (ch + diff * sh);
    Ok(GreenElements {
        g_ii,
        g_is,
        g_ss,
        g_ssp: g_ss - 1.0,
    })
}

/// Full rotating-frame Green matrix `e^{λt}` × the block pattern.
pub fn green_matrix(gamma_i: f64, gamma_s: f64, delta: f64, omega_i: f64, t: f64) -> Result<Mat5> {
    let el = green_elements(gamma_i, gamma_s, delta, t)?;
    let prefactor = (c64(-gamma_s, -omega_i) * t).exp();
    let mut g = Mat5::zeros();
    g[(0, 0)] = c64(el.g_ii, 0.0);
    for s in 1..5 {
        g[(0, s)] = el.g_is;
        g[(s, 0)] = el.g_is.conj();
        for s2 in 1..5 {
            g[(s, s2)] = c64(if s == s2 { el.g_ss } else { el.g_ssp }, 0.0);
        }
    }
    Ok(g * prefactor)
}

/// Long-time populations and correlators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyMoments {
    /// `⟨p_i† p_i⟩`.
    pub n_ii: f64,
    /// `⟨p_s† p_s⟩`.
    pub n_ss: f64,
    /// `⟨p_s† p_s'⟩`, `s ≠ s'`.
    pub n_ssp: f64,
    /// `⟨p_i† p_s†⟩`.
    pub n_is: C64,
}

pub fn steady_moments(gamma_i: f64, gamma_s: f64, delta: f64, n_b: f64) -> Result<SteadyMoments> {
    steady_moments_guarded(gamma_i, gamma_s, delta, n_b, STABILITY_GUARD)
}

pub fn steady_moments_guarded(
    gamma_i: f64,
    gamma_s: f64,
    delta: f64,
    n_b: f64,
    guard: f64,
) -> Result<SteadyMoments> {
    ensure_positive("gamma_i", gamma_i)?;
    ensure_positive("gamma_s", gamma_s)?;
    ensure_non_negative("delta", delta)?;
    ensure_non_negative("n_b", n_b)?;
    let d2 = delta * delta;
    let margin = gamma_i * gamma_s - 4.0 * d2;
    if margin <= guard {
        return Err(Error::Unstable { margin, guard });
    }
    let sum = gamma_i + gamma_s;
    let n_ii = n_b * gamma_i / sum * (gamma_s * sum - 4.0 * d2) / margin
        + (n_b + 1.0) * gamma_s / sum * 4.0 * d2 / margin;
    let pair = (n_b + 1.0) * gamma_i / sum * d2 / margin;
    let thermal = n_b * gamma_s / (4.0 * sum) * (gamma_i * sum - 4.0 * d2) / margin;
    let n_ss = pair + 0.75 * n_b + thermal;
    let n_ssp = pair - 0.25 * n_b + thermal;
    let n_is = c64(
        0.0,
        (2.0 * n_b + 1.0) * gamma_i * gamma_s * delta / (sum * margin),
    );
    Ok(SteadyMoments {
        n_ii,
        n_ss,
        n_ssp,
        n_is,
    })
}

/// `X = (N_ii N_ss' + |N_is|²) / (N_ii N_ss + |N_is|²)`.
pub fn entanglement_x(m: &SteadyMoments) -> Result<f64> {
    let pair = m.n_is.norm_sqr();
    let denom = m.n_ii * m.n_ss + pair;
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::UndefinedWeight);
    }
    Ok((m.n_ii * m.n_ssp + pair) / denom)
}
