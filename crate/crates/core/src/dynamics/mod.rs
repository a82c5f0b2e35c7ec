// SPDX-License-Identifier: Apache-2.0

//! Langevin dynamics of the idler and the four signal modes.
//!
//! Everything is written in the doubled basis `P = (p_i, p_s1†, …, p_s4†)`:
//! slot 0 carries the idler annihilator, slots 1–4 the signal creators.

mod correlators;
mod drift;
mod green;
mod integrator;
mod moments;
mod noise;

pub use correlators::{idler_signal_reversed, two_time_correlators, TwoTimeCorrelators};
pub use drift::{
    build_drift, stability_check, DriftMatrix, DriftSource, Frame, SignalIdlerModes,
    SignalIdlerSystem, Stability,
};
pub use green::{propagate_green, step_propagators, GreenMatrix};
pub use integrator::{AdaptiveIntegrator, Tolerance};
pub use moments::{propagate_moments, relaxation_horizon, MomentState};
pub use noise::{
    diffusion_matrix, Diffusion, NoiseModel, PhotoluminescenceModel, BOLTZMANN_MEV_PER_K,
};

/// Slot of a mode in the doubled basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeIndex {
    Idler,
    /// Signal channel, 0-based (`Signal(0)` is s1).
    Signal(usize),
}

impl ModeIndex {
    pub fn slot(self) -> usize {
        match self {
            ModeIndex::Idler => 0,
            ModeIndex::Signal(n) => {
                assert!(n < crate::N_SIGNALS, "signal index {n} out of range");
                n + 1
            }
        }
    }

    pub fn from_slot(slot: usize) -> Self {
        match slot {
            0 => ModeIndex::Idler,
            1..=4 => ModeIndex::Signal(slot - 1),
            _ => panic!("slot {slot} out of range"),
        }
    }
}

/// `J = diag(0, 1, 1, 1, 1)`: the commutator of the doubled basis.
pub(crate) fn signal_projector() -> crate::Mat5 {
    let mut j = crate::Mat5::zeros();
    for s in 1..crate::N_MODES {
        j[(s, s)] = crate::c64(1.0, 0.0);
    }
    j
}
