// SPDX-License-Identifier: Apache-2.0

//! Dormand–Prince 5(4) with an elementary step controller, specialised to
//! fixed-size complex matrix states.

use nalgebra::SMatrix;

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
        }
    }
}

#[inline]
fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone)]
pub struct AdaptiveIntegrator {
    pub tol: Tolerance,
    pub max_steps: usize,
    /// Initial step guess (ps); updated between calls of a chained integration.
    pub initial_step: f64,
}

impl AdaptiveIntegrator {
    pub fn new(tol: Tolerance) -> Self {
        Self {
            tol,
            max_steps: 2_000_000,
            initial_step: 1e-2,
        }
    }

    fn error_norm<const R: usize, const C: usize>(
        &self,
        err: &SMatrix<C64, R, C>,
        y0: &SMatrix<C64, R, C>,
        y1: &SMatrix<C64, R, C>,
    ) -> f64 {
        let mut acc = 0.0;
        for ((e, a), b) in err.iter().zip(y0.iter()).zip(y1.iter()) {
            let scale = self.tol.atol + self.tol.rtol * a.norm().max(b.norm());
            acc += (e.norm() / scale).powi(2);
        }
        (acc / (R * C) as f64).sqrt()
    }

    /// Integrates `dy/dt = f(t, y)` from `t0` to `t1 >= t0`.
    pub fn integrate<const R: usize, const C: usize, F>(
        &mut self,
        mut f: F,
        t0: f64,
        y0: SMatrix<C64, R, C>,
        t1: f64,
    ) -> Result<SMatrix<C64, R, C>>
    where
        F: FnMut(f64, &SMatrix<C64, R, C>) -> SMatrix<C64, R, C>,
    {
        if t1 < t0 {
            return Err(Error::TimeOrder { t1: t0, t2: t1 });
        }
        if t1 == t0 {
            return Ok(y0);
        }
        let mut t = t0;
        let mut y = y0;
        let mut h = self.initial_step.min(t1 - t0);
        let mut k1 = f(t, &y);
        let mut steps = 0usize;

        while t < t1 {
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::TooManySteps {
                    t,
                    max_steps: self.max_steps,
                });
            }
            let last = t + h >= t1;
            if last {
                h = t1 - t;
            }
            let k2 = f(t + C2 * h, &(y + k1 * re(h * A21)));
            let k3 = f(t + C3 * h, &(y + (k1 * re(A31) + k2 * re(A32)) * re(h)));
            let k4 = f(
                t + C4 * h,
                &(y + (k1 * re(A41) + k2 * re(A42) + k3 * re(A43)) * re(h)),
            );
            let k5 = f(
                t + C5 * h,
                &(y + (k1 * re(A51) + k2 * re(A52) + k3 * re(A53) + k4 * re(A54)) * re(h)),
            );
            let k6 = f(
                t + h,
                &(y + (k1 * re(A61) + k2 * re(A62) + k3 * re(A63) + k4 * re(A64) + k5 * re(A65))
                    * re(h)),
            );
            let y_new =
                y + (k1 * re(B1) + k3 * re(B3) + k4 * re(B4) + k5 * re(B5) + k6 * re(B6)) * re(h);
            let k7 = f(t + h, &y_new);
            let err =
                (k1 * re(E1) + k3 * re(E3) + k4 * re(E4) + k5 * re(E5) + k6 * re(E6) + k7 * re(E7))
                    * re(h);
            let en = self.error_norm(&err, &y, &y_new);

            if en <= 1.0 {
                t = if last { t1 } else { t + h };
                y = y_new;
                k1 = k7;
                let fac = if en == 0.0 {
                    5.0
                } else {
                    (0.9 * en.powf(-0.2)).clamp(0.2, 5.0)
                };
                // keep the grown step for the next call unless we were clipped
                if !last {
                    h *= fac;
                    self.initial_step = h;
                } else {
                    self.initial_step = self.initial_step.max(h * fac);
                }
            } else {
                h *= (0.9 * en.powf(-0.2)).clamp(0.1, 1.0);
                if h <= 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepSizeUnderflow { t, h });
                }
            }
        }
        Ok(y)
    }

    /// Integrates through the sorted output times, returning the state at each.
    pub fn integrate_grid<const R: usize, const C: usize, F>(
        &mut self,
        mut f: F,
        t0: f64,
        y0: SMatrix<C64, R, C>,
        times: &[f64],
    ) -> Result<Vec<SMatrix<C64, R, C>>>
    where
        F: FnMut(f64, &SMatrix<C64, R, C>) -> SMatrix<C64, R, C>,
    {
        let mut out = Vec::with_capacity(times.len());
        let (mut t, mut y) = (t0, y0);
        for &tk in times {
            y = self.integrate(&mut f, t, y, tk)?;
            t = tk;
            out.push(y);
        }
        Ok(out)
    }
}
