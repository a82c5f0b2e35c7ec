// SPDX-License-Identifier: Apache-2.0

//! Four-pump parametric polariton scattering in a planar microcavity.
//!
//! One idler mode at zero in-plane momentum is shared by four signal modes
//! on a ring of radius `2 k_p`. The crate covers
//!
//! * the linear polariton model and the effective parametric coupling ([`model`]),
//! * Langevin moment and Green-function propagation of the five coupled
//!   modes ([`dynamics`]),
//! * closed-form continuous-pump steady state ([`analytic`]),
//! * postselected two-photon tomography and the W/identity mixture fit
//!   ([`tomography`]),
//! * configuration, sweep drivers and CSV/JSON output ([`harness`]).
//!
//! Units: `ħ = 1`, frequencies and rates in rad/ps, times in ps.

pub mod analytic;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod model;
pub mod tomography;

pub use error::{Error, Result};

use nalgebra::SMatrix;
use num_complex::Complex64;

/// Complex scalar used throughout.
pub type C64 = Complex64;
/// Operator-valued quantities of the five coupled modes (idler + 4 signals).
pub type Mat5 = SMatrix<C64, 5, 5>;
/// Quantities over the four postselected signal channels.
pub type Mat4 = SMatrix<C64, 4, 4>;

/// Number of modes in the signal/idler system.
pub const N_MODES: usize = 5;
/// Number of signal channels.
pub const N_SIGNALS: usize = 4;

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entry modulus.
pub(crate) fn max_abs<const R: usize, const C: usize>(m: &SMatrix<C64, R, C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
