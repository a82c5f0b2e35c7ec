// SPDX-License-Identifier: Apache-2.0

//! Two-time correlators by quantum regression.
//!
//! Noise injected after the earlier time is uncorrelated with system
//! operators at that time, so a two-time correlator is the Green matrix
//! applied to the equal-time moments of the earlier time.

use crate::error::{Error, Result};
use crate::{Mat4, C64, N_SIGNALS};

use super::green::GreenMatrix;
use super::moments::MomentState;

/// Correlators between `t1` and a later time `t2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTimeCorrelators {
    pub t1: f64,
    pub t2: f64,
    /// `⟨p_i†(t1) p_i(t2)⟩`.
    pub idler_idler: C64,
    /// `(m, n) = ⟨p_sm†(t1) p_sn(t2)⟩`.
    pub signal_signal: Mat4,
    /// `⟨p_i†(t1) p_sm†(t2)⟩`.
    pub idler_signal: [C64; N_SIGNALS],
}

fn check_match(moments: &MomentState, green: &GreenMatrix) -> Result<()> {
    if green.t < green.t_prime {
        return Err(Error::TimeOrder {
            t1: green.t_prime,
            t2: green.t,
        });
    }
    if (green.t_prime - moments.time).abs() > 1e-9 * moments.time.abs().max(1.0) {
        return Err(Error::param(
            "green",
            format!(
                "propagator starts at {} but moments are taken at {}",
                green.t_prime, moments.time
            ),
        ));
    }
    Ok(())
}

/// Correlators at `(t1, t2)`, `t2 >= t1`, from the moments at `t1` and
/// `G(t2, t1)`.
pub fn two_time_correlators(
    at_t1: &MomentState,
    green: &GreenMatrix,
) -> Result<TwoTimeCorrelators> {
    check_match(at_t1, green)?;
    let (q, _) = at_t1.to_doubled();
    let g = &green.matrix;
    let qgt = q * g.transpose();
    let gq = g.conjugate() * q;
    Ok(TwoTimeCorrelators {
        t1: green.t_prime,
        t2: green.t,
        idler_idler: qgt[(0, 0)],
        signal_signal: Mat4::from_fn(|m, n| gq[(n + 1, m + 1)]),
        idler_signal: std::array::from_fn(|m| qgt[(0, m + 1)]),
    })
}

/// `⟨p_sm†(t2) p_i†(t1)⟩` for `t1 >= t2`, from the moments at `t2` and
/// `G(t1, t2)`.
///
/// This is the time-normal-ordered counterpart of
/// [`TwoTimeCorrelators::idler_signal`] when the idler is detected last.
pub fn idler_signal_reversed(at_t2: &MomentState, green: &GreenMatrix) -> Result<[C64; N_SIGNALS]> {
    check_match(at_t2, green)?;
    let (q, _) = at_t2.to_doubled();
    let row = green.matrix.conjugate() * q;
    Ok(std::array::from_fn(|m| row[(0, m + 1)]))
}
