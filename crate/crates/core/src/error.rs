// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("stability condition violated: gamma_i*gamma_s - 4*delta^2 = {margin:e} (required > {guard:e})")]
    Unstable { margin: f64, guard: f64 },

    #[error("step size underflow at t = {t} ps (h = {h:e}); system too stiff for the requested tolerance")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("integrator exceeded {max_steps} steps at t = {t} ps")]
    TooManySteps { t: f64, max_steps: usize },

    #[error("pump geometry violates momentum conservation: pumps {pair:?} sum to {total:?}, which is neither the idler nor a signal mode")]
    Geometry {
        pair: (usize, usize),
        total: [f64; 2],
    },

    #[error("time ordering violated: t2 = {t2} < t1 = {t1}")]
    TimeOrder { t1: f64, t2: f64 },

    #[error("entanglement weight undefined: all correlators vanish (no drive and no background)")]
    UndefinedWeight,

    #[error("no emission in detection window: density matrix has zero trace")]
    NoEmission,

    #[error("state not of W+identity form: relative residual {residual:e} exceeds {threshold:e}")]
    NotWMixture { residual: f64, threshold: f64 },

    #[error("fitted W weight {x} outside [-{tol}, 1+{tol}]")]
    WeightOutOfRange { x: f64, tol: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by the configuration rather than the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Unstable { .. }
                | Error::Geometry { .. }
                | Error::Config(_)
                | Error::Json(_)
        )
    }
}

pub(crate) fn ensure_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be finite, got {value}")))
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    ensure_finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be > 0, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<()> {
    ensure_finite(name, value)?;
    if value >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be >= 0, got {value}")))
    }
}
