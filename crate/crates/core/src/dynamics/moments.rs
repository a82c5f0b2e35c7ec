// SPDX-License-Identifier: Apache-2.0

//! Equal-time second moments.
//!
//! Internally the moments live in two 5×5 blocks of the doubled basis:
//!
//! * `Q_ab = ⟨P_a† P_b⟩ − J_ab`, normal ordered (`J = diag(0,1,1,1,1)`),
//!   obeying `Q' = M* Q + Q Mᵀ + D + M* J + J Mᵀ`;
//! * `R_ab = ⟨P_a† P_b†⟩`, obeying `R' = M* R + R M†` (no noise inflow).
//!
//! Subtracting the commutator keeps the vacuum at exactly zero so that weak
//! pair generation is resolved to full relative precision.

use nalgebra::SMatrix;

use crate::error::{Error, Result};
use crate::{c64, Mat4, Mat5, C64, N_MODES, N_SIGNALS};

use super::drift::{DriftSource, SignalIdlerSystem};
use super::integrator::{AdaptiveIntegrator, Tolerance};
use super::signal_projector;

type Packed = SMatrix<C64, 5, 10>;

/// Second moments of the five modes (in the frame of the drift that produced
/// them) at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    pub time: f64,
    /// `N_xy = ⟨p_x† p_y⟩`, modes ordered `(i, s1, …, s4)`.
    pub normal: Mat5,
    /// `A_xy = ⟨p_x p_y⟩`.
    pub anomalous: Mat5,
}

impl MomentState {
    pub fn vacuum(time: f64) -> Self {
        Self {
            time,
            normal: Mat5::zeros(),
            anomalous: Mat5::zeros(),
        }
    }

    /// `⟨p_i† p_i⟩`.
    pub fn idler_population(&self) -> f64 {
        self.normal[(0, 0)].re
    }

    /// `⟨p_sm† p_sn⟩` for the four signals.
    pub fn signal_block(&self) -> Mat4 {
        self.normal.fixed_view::<4, 4>(1, 1).into_owned()
    }

    /// `⟨p_i† p_sm†⟩`.
    pub fn idler_signal(&self) -> [C64; N_SIGNALS] {
        std::array::from_fn(|m| self.anomalous[(0, m + 1)].conj())
    }

    /// Largest `|N − N†|` and `|A − Aᵀ|` entry.
    pub fn symmetry_defect(&self) -> f64 {
        let h = crate::max_abs(&(self.normal - self.normal.adjoint()));
        let s = crate::max_abs(&(self.anomalous - self.anomalous.transpose()));
        h.max(s)
    }

    pub fn min_population(&self) -> f64 {
        (0..N_MODES)
            .map(|x| self.normal[(x, x)].re)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self) -> Result<()> {
        if self.symmetry_defect() > 1e-10 {
            return Err(Error::param(
                "moments",
                format!(
                    "normal block not Hermitian or anomalous block not symmetric ({:e})",
                    self.symmetry_defect()
                ),
            ));
        }
        if self.min_population() < -1e-10 {
            return Err(Error::param("moments", "negative population"));
        }
        Ok(())
    }

    /// Normal-ordered doubled-basis blocks `(Q, R)`.
    pub fn to_doubled(&self) -> (Mat5, Mat5) {
        let (n, a) = (&self.normal, &self.anomalous);
        let mut q = Mat5::zeros();
        let mut r = Mat5::zeros();
        q[(0, 0)] = n[(0, 0)];
        r[(0, 0)] = a[(0, 0)].conj();
        for s in 1..N_MODES {
            q[(0, s)] = a[(0, s)].conj();
            q[(s, 0)] = a[(s, 0)];
            r[(0, s)] = n[(0, s)];
            r[(s, 0)] = n[(0, s)];
            for s2 in 1..N_MODES {
                q[(s, s2)] = n[(s2, s)];
                r[(s, s2)] = a[(s, s2)];
            }
        }
        (q, r)
    }

    pub fn from_doubled(time: f64, q: &Mat5, r: &Mat5) -> Self {
        let mut n = Mat5::zeros();
        let mut a = Mat5::zeros();
        n[(0, 0)] = c64(q[(0, 0)].re, 0.0);
        a[(0, 0)] = r[(0, 0)].conj();
        for s in 1..N_MODES {
            let pair = 0.5 * (q[(0, s)].conj() + q[(s, 0)]);
            a[(0, s)] = pair;
            a[(s, 0)] = pair;
            let cross = 0.5 * (r[(0, s)] + r[(s, 0)]);
            n[(0, s)] = cross;
            n[(s, 0)] = cross.conj();
            for s2 in 1..N_MODES {
                n[(s2, s)] = 0.5 * (q[(s, s2)] + q[(s2, s)].conj());
                a[(s, s2)] = 0.5 * (r[(s, s2)] + r[(s2, s)]);
            }
        }
        Self {
            time,
            normal: n,
            anomalous: a,
        }
    }
}

fn pack(q: &Mat5, r: &Mat5) -> Packed {
    let mut p = Packed::zeros();
    p.fixed_view_mut::<5, 5>(0, 0).copy_from(q);
    p.fixed_view_mut::<5, 5>(0, 5).copy_from(r);
    p
}

fn unpack(p: &Packed) -> (Mat5, Mat5) {
    (
        p.fixed_view::<5, 5>(0, 0).into_owned(),
        p.fixed_view::<5, 5>(0, 5).into_owned(),
    )
}

/// Propagates the moments through the sorted `times` (all `>= initial.time`).
///
/// The scalar carrier of the drift cancels in `Q`; in `R` it is a pure phase
/// `e^{2iω(t−t0)}` and is restored after integration.
pub fn propagate_moments(
    initial: &MomentState,
    system: &SignalIdlerSystem,
    times: &[f64],
    tol: Tolerance,
) -> Result<Vec<MomentState>> {
    initial.validate()?;
    system.validate()?;
    if let Some(w) = times.windows(2).find(|w| w[1] < w[0]) {
        return Err(Error::TimeOrder { t1: w[0], t2: w[1] });
    }
    if let Some(&first) = times.first() {
        if first < initial.time {
            return Err(Error::TimeOrder {
                t1: initial.time,
                t2: first,
            });
        }
    }
    let j = signal_projector();
    let rhs = |t: f64, y: &Packed| -> Packed {
        let m = system.reduced_drift(t);
        let mc = m.conjugate();
        let inflow = system.diffusion_at(t).doubled() + mc * j + j * m.transpose();
        let (q, r) = unpack(y);
        let dq = mc * q + q * m.transpose() + inflow;
        let dr = mc * r + r * m.adjoint();
        pack(&dq, &dr)
    };
    let (q0, r0) = initial.to_doubled();
    let mut integ = AdaptiveIntegrator::new(tol);
    let states = integ.integrate_grid(rhs, initial.time, pack(&q0, &r0), times)?;
    let omega = system.carrier();
    Ok(states
        .iter()
        .zip(times)
        .map(|(p, &t)| {
            let (q, r) = unpack(p);
            let phi = 2.0 * omega * (t - initial.time);
            MomentState::from_doubled(t, &q, &(r * c64(phi.cos(), phi.sin())))
        })
        .collect())
}

/// Time after which a continuously pumped system started from vacuum is
/// within `e^{-decades·ln10}` of its steady state. At least `40/γ_min`.
pub fn relaxation_horizon(gamma_i: f64, gamma_s: f64, delta: f64, decades: f64) -> f64 {
    let omega = (gamma_i - gamma_s).hypot(4.0 * delta);
    // slowest eigenvalue of the drift; moments decay at twice that rate
    let slowest = gamma_s.min(0.5 * (gamma_i + gamma_s - omega));
    let base = 40.0 / gamma_i.min(gamma_s);
    if slowest <= 0.0 {
        return f64::INFINITY;
    }
    base.max(decades * std::f64::consts::LN_10 / (2.0 * slowest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::drift::SignalIdlerSystem;

    fn grid(t_end: f64, n: usize) -> Vec<f64> {
        (1..=n).map(|k| t_end * k as f64 / n as f64).collect()
    }

    #[test]
    fn doubled_roundtrip() {
        let mut s = MomentState::vacuum(0.0);
        s.normal[(0, 0)] = c64(0.7, 0.0);
        s.normal[(1, 1)] = c64(0.3, 0.0);
        s.normal[(1, 2)] = c64(0.1, 0.05);
        s.normal[(2, 1)] = c64(0.1, -0.05);
        s.normal[(0, 3)] = c64(0.02, 0.01);
        s.normal[(3, 0)] = c64(0.02, -0.01);
        s.anomalous[(0, 2)] = c64(0.2, -0.4);
        s.anomalous[(2, 0)] = c64(0.2, -0.4);
        s.anomalous[(3, 4)] = c64(0.05, 0.0);
        s.anomalous[(4, 3)] = c64(0.05, 0.0);
        let (q, r) = s.to_doubled();
        let back = MomentState::from_doubled(0.0, &q, &r);
        assert!((back.normal - s.normal).norm() < 1e-15);
        assert!((back.anomalous - s.anomalous).norm() < 1e-15);
        assert!((q - q.adjoint()).norm() < 1e-15);
    }

    #[test]
    fn undriven_vacuum_stays_empty() {
        let sys = SignalIdlerSystem::continuous(1.0, 1.0, 0.0, 3.0, 0.0);
        let out = propagate_moments(
            &MomentState::vacuum(0.0),
            &sys,
            &grid(10.0, 20),
            Tolerance::default(),
        )
        .unwrap();
        for m in out {
            assert_eq!(m.normal, Mat5::zeros());
            assert_eq!(m.anomalous, Mat5::zeros());
        }
    }

    #[test]
    fn single_mode_thermalization() {
        // N(t) = n_b (1 - e^{-2γt})
        let sys = SignalIdlerSystem::continuous(1.0, 1.0, 0.0, 0.0, 0.5);
        let times = grid(6.0, 12);
        let out = propagate_moments(
            &MomentState::vacuum(0.0),
            &sys,
            &times,
            Tolerance::default(),
        )
        .unwrap();
        for (m, &t) in out.iter().zip(&times) {
            let expect = 0.5 * (1.0 - (-2.0 * t).exp());
            for x in 0..5 {
                assert!((m.normal[(x, x)].re - expect).abs() < 1e-9, "t={t} x={x}");
            }
            assert!(m.normal[(1, 2)].norm() < 1e-14);
        }
    }

    #[test]
    fn continuous_pump_reaches_analytic_idler_population() {
        let sys = SignalIdlerSystem::continuous(1.0, 1.0, 0.4, 0.0, 0.0);
        let t_end = relaxation_horizon(1.0, 1.0, 0.4, 13.0);
        let out = propagate_moments(
            &MomentState::vacuum(0.0),
            &sys,
            &[t_end],
            Tolerance::default(),
        )
        .unwrap();
        assert!((out[0].idler_population() - 8.0 / 9.0).abs() < 1e-8);
    }

    #[test]
    fn anomalous_block_rotates_with_carrier() {
        // Start with ⟨p_i p_i⟩ = a; undriven it evolves as a e^{-2iω_i t - 2γ_i t}.
        let omega = 40.0;
        let sys = SignalIdlerSystem::continuous(0.5, 1.0, 0.0, omega, 0.0);
        let mut s = MomentState::vacuum(0.0);
        s.anomalous[(0, 0)] = c64(0.3, 0.0);
        s.normal[(0, 0)] = c64(0.5, 0.0);
        let out = propagate_moments(&s, &sys, &[1.3], Tolerance::default()).unwrap();
        let t: f64 = 1.3;
        let expect = 0.3 * (c64(-1.0, -2.0 * omega) * t).exp();
        assert!((out[0].anomalous[(0, 0)] - expect).norm() < 1e-9);
    }

    #[test]
    fn rejects_unsorted_grid() {
        let sys = SignalIdlerSystem::continuous(1.0, 1.0, 0.1, 0.0, 0.0);
        let r = propagate_moments(
            &MomentState::vacuum(0.0),
            &sys,
            &[1.0, 0.5],
            Tolerance::default(),
        );
        assert!(matches!(r, Err(Error::TimeOrder { .. })));
    }

    #[test]
    fn horizon_grows_near_threshold() {
        assert_eq!(relaxation_horizon(1.0, 1.0, 0.0, 13.0), 40.0);
        assert!(relaxation_horizon(1.0, 1.0, 0.45, 13.0) > 100.0);
        assert!(relaxation_horizon(1.0, 1.0, 0.5, 13.0).is_infinite());
    }
}
