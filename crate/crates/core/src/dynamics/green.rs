// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::{c64, Mat5};

use super::drift::DriftSource;
use super::integrator::{AdaptiveIntegrator, Tolerance};

/// Propagator `G(t, t')` of `dG/dt = M(t) G`, `G(t', t') = I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenMatrix {
    /// Later time `t` (ps).
    pub t: f64,
    /// Earlier time `t'` (ps).
    pub t_prime: f64,
    pub matrix: Mat5,
}

impl GreenMatrix {
    pub fn identity(t: f64) -> Self {
        Self {
            t,
            t_prime: t,
            matrix: Mat5::identity(),
        }
    }

    /// `G(t2, t1) · G(t1, t0)`.
    pub fn compose(&self, earlier: &GreenMatrix) -> Result<GreenMatrix> {
        let gap = (self.t_prime - earlier.t).abs();
        if gap > 1e-12 * self.t_prime.abs().max(1.0) {
            return Err(Error::param(
                "green",
                format!(
                    "cannot compose G({}, {}) with G({}, {})",
                    self.t, self.t_prime, earlier.t, earlier.t_prime
                ),
            ));
        }
        Ok(GreenMatrix {
            t: self.t,
            t_prime: earlier.t_prime,
            matrix: self.matrix * earlier.matrix,
        })
    }
}

fn carrier_phase(omega: f64, dt: f64) -> crate::C64 {
    let phi = -omega * dt;
    c64(phi.cos(), phi.sin())
}

/// Integrates the Green matrix from `t_prime` to `t` with the reduced drift
/// and restores the scalar carrier analytically.
pub fn propagate_green<S: DriftSource + ?Sized>(
    source: &S,
    t_prime: f64,
    t: f64,
    tol: Tolerance,
) -> Result<GreenMatrix> {
    if t < t_prime {
        return Err(Error::TimeOrder { t1: t_prime, t2: t });
    }
    if !(tol.rtol > 0.0 && tol.atol > 0.0) {
        return Err(Error::param("tol", "tolerances must be positive"));
    }
    if t == t_prime {
        return Ok(GreenMatrix::identity(t));
    }
    let mut integ = AdaptiveIntegrator::new(tol);
    let g = integ.integrate(
        |tau, g: &Mat5| source.reduced_drift(tau) * g,
        t_prime,
        Mat5::identity(),
        t,
    )?;
    Ok(GreenMatrix {
        t,
        t_prime,
        matrix: g * carrier_phase(source.carrier(), t - t_prime),
    })
}

/// One-interval propagators `G(t_{k+1}, t_k)` over a sorted grid.
pub fn step_propagators<S: DriftSource + ?Sized>(
    source: &S,
    times: &[f64],
    tol: Tolerance,
) -> Result<Vec<GreenMatrix>> {
    let mut out = Vec::with_capacity(times.len().saturating_sub(1));
    // For a stationary drift on a uniform grid every step is the same matrix.
    let mut cached: Option<(f64, Mat5)> = None;
    for w in times.windows(2) {
        let dt = w[1] - w[0];
        let g = match cached {
            Some((h, m))
                if source.is_stationary() && (h - dt).abs() <= 1e-14 * dt.abs().max(1.0) =>
            {
                GreenMatrix {
                    t: w[1],
                    t_prime: w[0],
                    matrix: m,
                }
            }
            _ => {
                let g = propagate_green(source, w[0], w[1], tol)?;
                cached = Some((dt, g.matrix));
                g
            }
        };
        out.push(g);
    }
    Ok(out)
}
