// SPDX-License-Identifier: Apache-2.0

//! Postselected two-photon tomography over the basis `|1_i, 1_sn⟩` and the
//! W/identity mixture fit.
//!
//! With Gaussian statistics the four-point detection correlator factorizes:
//!
//! `ρ_mn ∝ ∬ ⟨p_i†p_i⟩(t1) ⟨p_sm†p_sn⟩(t2) + ⟨p_i†(t1)p_sm†(t2)⟩ ⟨p_sn(t2)p_i(t1)⟩ dt1 dt2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::SteadyMoments;
use crate::dynamics::{
    idler_signal_reversed, propagate_moments, step_propagators, two_time_correlators, GreenMatrix,
    MomentState, SignalIdlerSystem, Tolerance,
};
use crate::error::{ensure_positive, Error, Result};
use crate::{c64, Mat4, C64, N_SIGNALS};

/// Correlators on a two-time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorGrid {
    pub times: Vec<f64>,
    /// `⟨p_i† p_i⟩(t)`.
    pub idler_population: Vec<f64>,
    /// `⟨p_sm† p_sn⟩(t)`.
    pub signal_block: Vec<Mat4>,
    /// Time-normal-ordered `⟨p_i†(t1) p_sm†(t2)⟩`, row-major in `(t1, t2)`.
    pub idler_signal: Vec<[C64; N_SIGNALS]>,
}

impl CorrelatorGrid {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn pair(&self, k1: usize, k2: usize) -> &[C64; N_SIGNALS] {
        &self.idler_signal[k1 * self.times.len() + k2]
    }

    /// Single-point table for a stationary state: every correlator takes its
    /// coincidence value.
    pub fn stationary(moments: &MomentState) -> Result<Self> {
        let c = two_time_correlators(moments, &GreenMatrix::identity(moments.time))?;
        Ok(Self {
            times: vec![moments.time],
            idler_population: vec![moments.idler_population()],
            signal_block: vec![moments.signal_block()],
            idler_signal: vec![c.idler_signal],
        })
    }

    /// Single-point table from closed-form long-time moments.
    pub fn from_steady(m: &SteadyMoments) -> Self {
        let block = Mat4::from_fn(|a, b| c64(if a == b { m.n_ss } else { m.n_ssp }, 0.0));
        Self {
            times: vec![0.0],
            idler_population: vec![m.n_ii],
            signal_block: vec![block],
            idler_signal: vec![[m.n_is; N_SIGNALS]],
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.times.len();
        if n == 0 {
            return Err(Error::param("grid", "empty time grid"));
        }
        if self.idler_population.len() != n
            || self.signal_block.len() != n
            || self.idler_signal.len() != n * n
        {
            return Err(Error::param(
                "grid",
                "correlator tables do not match the time grid",
            ));
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("grid", "times must be strictly increasing"));
        }
        Ok(())
    }
}

/// Uniform grid `0, h, …, T_d`; the last interval is shortened if `T_d/h` is
/// not an integer.
pub fn detection_grid(window: f64, step: f64) -> Result<Vec<f64>> {
    ensure_positive("detection window", window)?;
    ensure_positive("grid step", step)?;
    let n = (window / step - 1e-9).ceil() as usize;
    let mut times: Vec<f64> = (0..n).map(|k| k as f64 * step).collect();
    times.push(window);
    Ok(times)
}

/// `(j, forward, reversed)` for one later grid index `j`.
type PairEntry = (usize, [C64; N_SIGNALS], [C64; N_SIGNALS]);

/// Builds the full two-time table over `[0, T_d]` for a system started in
/// the vacuum at `t = 0`.
pub fn window_correlators(
    system: &SignalIdlerSystem,
    window: f64,
    step: f64,
    tol: Tolerance,
) -> Result<CorrelatorGrid> {
    let times = detection_grid(window, step)?;
    let mut moments = vec![MomentState::vacuum(0.0)];
    moments.extend(propagate_moments(&moments[0], system, &times[1..], tol)?);
    let steps = step_propagators(system, &times, tol)?;
    let n = times.len();

    // Row k holds G(t_j, t_k) for j >= k applied both ways.
    let rows: Vec<Vec<PairEntry>> = (0..n)
        .into_par_iter()
        .map(|k| -> Result<_> {
            let mut g = GreenMatrix::identity(times[k]);
            let mut row = Vec::with_capacity(n - k);
            for j in k..n {
                if j > k {
                    g = steps[j - 1].compose(&g)?;
                }
                let forward = two_time_correlators(&moments[k], &g)?.idler_signal;
                let reversed = idler_signal_reversed(&moments[k], &g)?;
                row.push((j, forward, reversed));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let zero = [c64(0.0, 0.0); N_SIGNALS];
    let mut table = vec![zero; n * n];
    for (k, row) in rows.into_iter().enumerate() {
        for (j, forward, reversed) in row {
            // t1 = t_k <= t2 = t_j
            table[k * n + j] = forward;
            // t1 = t_j >= t2 = t_k
            table[j * n + k] = reversed;
        }
    }
    Ok(CorrelatorGrid {
        idler_population: moments.iter().map(MomentState::idler_population).collect(),
        signal_block: moments.iter().map(MomentState::signal_block).collect(),
        idler_signal: table,
        times,
    })
}

/// Composite trapezoid weights; a single point gets weight one.
pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    if n == 1 {
        return vec![1.0];
    }
    let mut w = vec![0.0; n];
    for k in 0..n - 1 {
        let h = 0.5 * (times[k + 1] - times[k]);
        w[k] += h;
        w[k + 1] += h;
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    pub matrix: Mat4,
    /// Trace of the unnormalized double integral.
    pub normalization: f64,
}

pub fn reconstruct_rho(grid: &CorrelatorGrid) -> Result<DensityMatrix4> {
    grid.validate()?;
    let n = grid.len();
    let w = trapezoid_weights(&grid.times);
    let idler_total: f64 = w
        .iter()
        .zip(&grid.idler_population)
        .map(|(w, p)| w * p)
        .sum();
    let signal_total: Mat4 = w
        .iter()
        .zip(&grid.signal_block)
        .fold(Mat4::zeros(), |acc, (w, s)| acc + s * c64(*w, 0.0));

    let pair_rows: Vec<Mat4> = (0..n)
        .into_par_iter()
        .map(|k1| {
            let mut acc = Mat4::zeros();
            for (k2, &wk) in w.iter().enumerate() {
                let c = grid.pair(k1, k2);
                for a in 0..N_SIGNALS {
                    for b in 0..N_SIGNALS {
                        acc[(a, b)] += c[a] * c[b].conj() * wk;
                    }
                }
            }
            acc * c64(w[k1], 0.0)
        })
        .collect();
    let pair_total = pair_rows.iter().fold(Mat4::zeros(), |acc, r| acc + r);

    let raw = signal_total * c64(idler_total, 0.0) + pair_total;
    let trace = raw.trace().re;
    if !trace.is_finite() || trace <= 0.0 {
        return Err(Error::NoEmission);
    }
    Ok(DensityMatrix4 {
        matrix: raw / c64(trace, 0.0),
        normalization: trace,
    })
}

/// Weight of the W projector in `ρ = X·|W⟩⟨W| + (1 − X)·I/4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WMixture {
    pub x_weight: f64,
    /// Frobenius distance between `ρ` and the fitted mixture.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Largest accepted `residual / ‖ρ‖_F`.
    pub max_relative_residual: f64,
    /// Slack on `X ∈ [0, 1]` before clamping.
    pub range_tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_relative_residual: 1e-3,
            range_tolerance: 1e-6,
        }
    }
}

/// Projector onto the W state: all entries 1/4.
pub fn w_projector() -> Mat4 {
    Mat4::from_element(c64(0.25, 0.0))
}

pub fn w_mixture(x: f64) -> Mat4 {
    w_projector() * c64(x, 0.0) + Mat4::identity() * c64(0.25 * (1.0 - x), 0.0)
}

/// Least-squares fit of `ρ` onto the trace-one family `X W + (1 − X) I/4`.
pub fn fit_w_mixture(rho: &DensityMatrix4, opts: &FitOptions) -> Result<WMixture> {
    let m = &rho.matrix;
    // ‖W − I/4‖² = 3/4 and ⟨W − I/4, ρ − I/4⟩ = ¼ Σ_{a≠b} Re ρ_ab.
    let mut off = 0.0;
    for a in 0..N_SIGNALS {
        for b in 0..N_SIGNALS {
            if a != b {
                off += m[(a, b)].re;
            }
        }
    }
    let x = off / 3.0;
    let residual = (m - w_mixture(x)).norm();
    let scale = m.norm().max(f64::MIN_POSITIVE);
    if residual / scale > opts.max_relative_residual {
        return Err(Error::NotWMixture {
            residual: residual / scale,
            threshold: opts.max_relative_residual,
        });
    }
    if x < -opts.range_tolerance || x > 1.0 + opts.range_tolerance {
        return Err(Error::WeightOutOfRange {
            x,
            tol: opts.range_tolerance,
        });
    }
    Ok(WMixture {
        x_weight: x.clamp(0.0, 1.0),
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoDiagnostics {
    /// `max |ρ − ρ†|`.
    pub hermiticity_defect: f64,
    /// `|tr ρ − 1|`.
    pub trace_defect: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    /// Largest pairwise difference between diagonal entries.
    pub diagonal_defect: f64,
    /// Largest pairwise difference between off-diagonal entries.
    pub off_diagonal_defect: f64,
}

pub fn validate_rho(rho: &DensityMatrix4) -> RhoDiagnostics {
    let m = &rho.matrix;
    let hermiticity_defect = crate::max_abs(&(m - m.adjoint()));
    let trace_defect = (m.trace() - c64(1.0, 0.0)).norm();
    let hermitian = (m + m.adjoint()) * c64(0.5, 0.0);
    let min_eigenvalue = hermitian
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);

    let spread = |vals: &[C64]| {
        let mut worst = 0.0f64;
        for (k, a) in vals.iter().enumerate() {
            for b in &vals[k + 1..] {
                worst = worst.max((a - b).norm());
            }
        }
        worst
    };
    let diag: Vec<C64> = (0..N_SIGNALS).map(|a| m[(a, a)]).collect();
    let off: Vec<C64> = (0..N_SIGNALS)
        .flat_map(|a| (0..N_SIGNALS).filter(move |&b| b != a).map(move |b| (a, b)))
        .map(|(a, b)| m[(a, b)])
        .collect();
    RhoDiagnostics {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        diagonal_defect: spread(&diag),
        off_diagonal_defect: spread(&off),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{entanglement_x, steady_moments};
    use approx::assert_abs_diff_eq;

    fn rho(m: Mat4) -> DensityMatrix4 {
        DensityMatrix4 {
            matrix: m,
            normalization: 1.0,
        }
    }

    #[test]
    fn identity_state() {
        let r = rho(Mat4::identity() * c64(0.25, 0.0));
        let fit = fit_w_mixture(&r, &FitOptions::default()).unwrap();
        assert_eq!(fit.x_weight, 0.0);
        assert_eq!(fit.residual, 0.0);
        let d = validate_rho(&r);
        assert_eq!(d.hermiticity_defect, 0.0);
        assert_eq!(d.trace_defect, 0.0);
        assert_eq!(d.diagonal_defect, 0.0);
        assert_eq!(d.off_diagonal_defect, 0.0);
        assert_abs_diff_eq!(d.min_eigenvalue, 0.25, epsilon = 1e-15);
    }

    #[test]
    fn pure_w_state() {
        let fit = fit_w_mixture(&rho(w_projector()), &FitOptions::default()).unwrap();
        assert_abs_diff_eq!(fit.x_weight, 1.0, epsilon = 1e-15);
        assert!(fit.residual < 1e-15);
    }

    #[test]
    fn perturbed_off_diagonal_is_reported() {
        let eps = 1e-3;
        let mut m = w_mixture(0.4);
        m[(1, 3)] += c64(eps, 0.0);
        let d = validate_rho(&rho(m));
        assert_abs_diff_eq!(d.off_diagonal_defect, eps, epsilon = 1e-15);
        assert_eq!(d.diagonal_defect, 0.0);
    }

    #[test]
    fn non_w_state_is_flagged() {
        let mut m = Mat4::zeros();
        m[(0, 0)] = c64(1.0, 0.0);
        assert!(matches!(
            fit_w_mixture(&rho(m), &FitOptions::default()),
            Err(Error::NotWMixture { .. })
        ));
    }

    #[test]
    fn thermal_state_reconstructs_to_identity() {
        let s = steady_moments(1.0, 1.0, 0.0, 0.7).unwrap();
        let r = reconstruct_rho(&CorrelatorGrid::from_steady(&s)).unwrap();
        assert!((r.matrix - Mat4::identity() * c64(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn steady_reconstruction_matches_closed_form() {
        let s = steady_moments(1.0, 1.0, 0.4, 0.5).unwrap();
        let r = reconstruct_rho(&CorrelatorGrid::from_steady(&s)).unwrap();
        let fit = fit_w_mixture(&r, &FitOptions::default()).unwrap();
        let x = entanglement_x(&s).unwrap();
        assert_abs_diff_eq!(fit.x_weight, x, epsilon = 1e-14);
        assert!(fit.residual < 1e-10);
        assert_abs_diff_eq!(x, 0.6636, epsilon = 5e-5);
    }

    #[test]
    fn zero_emission_is_undefined() {
        let s = SteadyMoments {
            n_ii: 0.0,
            n_ss: 0.0,
            n_ssp: 0.0,
            n_is: c64(0.0, 0.0),
        };
        assert!(matches!(
            reconstruct_rho(&CorrelatorGrid::from_steady(&s)),
            Err(Error::NoEmission)
        ));
    }

    #[test]
    fn grid_shape() {
        let g = detection_grid(120.0, 0.25).unwrap();
        assert_eq!(g.len(), 481);
        assert_eq!(*g.last().unwrap(), 120.0);
        let g = detection_grid(1.0, 0.3).unwrap();
        assert_eq!(g, vec![0.0, 0.3, 0.6, 0.8999999999999999, 1.0]);
        assert_eq!(trapezoid_weights(&[0.0, 1.0, 3.0]), vec![0.5, 1.5, 1.0]);
    }
}
