use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical knobs shared by every computation.
///
/// Built with [`PrecisionContext::new`] (defaults derived from `digits`) and
/// checked by [`PrecisionContext::validate`]; immutable afterwards.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    /// Decimal working precision.
    pub digits: u32,
    /// Gauss-Legendre nodes per panel above height 1.
    pub quad_order: usize,
    /// Default q-series truncation length.
    pub series_len: usize,
    /// Finite-difference step.
    pub fd_step: f64,
    /// Height above which rays switch to decay-truncated panels.
    pub tail_height: f64,
    /// Tolerance for checks that are exact up to rounding and quadrature.
    pub tol_tight: f64,
    /// Tolerance for finite-difference checks.
    pub tol_fd: f64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::with_digits(50)
    }
}

impl PrecisionContext {
    /// Context with defaults for `digits` and validation applied.
    pub fn new(digits: u32) -> Result<Self> {
        let ctx = Self::with_digits(digits);
        ctx.validate()?;
        Ok(ctx)
    }

    fn with_digits(digits: u32) -> Self {
        Self {
            digits,
            quad_order: 40,
            series_len: 256,
            fd_step: 10f64.powf(-(digits as f64) / 3.0),
            tail_height: 1.0,
            tol_tight: 1e-20,
            tol_fd: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidContext(m.to_string()));
        if self.digits < 30 {
            return bad("digits must be at least 30");
        }
        if self.fd_step.is_nan() || self.fd_step <= 0.0 || 2.0 * self.fd_step.log10() <= -(self.digits as f64) {
            return bad("fd_step^2 must exceed 10^-digits");
        }
        if self.series_len < 16 {
            return bad("series_len must be at least 16");
        }
        if self.tail_height.is_nan() || self.tail_height < 1.0 {
            return bad("tail_height must be at least 1");
        }
        if self.quad_order < 4 {
            return bad("quad_order must be at least 4");
        }
        if !(self.tol_tight > 0.0 && self.tol_fd > 0.0) {
            return bad("tolerances must be positive");
        }
        Ok(())
    }

    /// Working precision in bits: ten guard digits above `digits`.
    pub fn prec(&self) -> u32 {
        ((self.digits as f64 + 10.0) * std::f64::consts::LOG2_10).ceil() as u32
    }

    /// Internal convergence target for quadrature and series.
    pub fn quad_eps(&self) -> f64 {
        10f64.powi(-(self.digits as i32))
    }

    /// Truncation target for tails of infinite sums and rays.
    pub fn trunc_eps(&self) -> f64 {
        10f64.powi(-(self.digits as i32) - 5)
    }

    pub fn fd_step_float(&self) -> Float {
        Float::with_val(self.prec(), self.fd_step)
    }

    pub fn float(&self, x: f64) -> Float {
        Float::with_val(self.prec(), x)
    }
}
