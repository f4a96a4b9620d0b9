//! q-series with coefficients at working precision, and their evaluation.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{pi, Complex, PrecisionContext};

/// Imaginary part below which modular series are moved by `S` before summing.
pub const S_FALLBACK_HEIGHT: f64 = 0.5;

/// Certified growth of coefficients beyond the stored window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TailBound {
    /// Coefficients past the window vanish.
    Exact,
    /// `|a(n)| ≤ c·n^alpha`.
    Polynomial { c: f64, alpha: f64 },
    /// `|a(n)| ≤ c·exp(beta·√n)`, the growth of weakly holomorphic forms.
    SubExponential { c: f64, beta: f64 },
    /// Polynomial bound fitted to the stored coefficients rather than proved.
    Empirical { c: f64, alpha: f64 },
}

impl TailBound {
    /// Bound for the series `factor·n^shift·a(n)`.
    pub fn rescaled(self, factor: f64, shift: f64) -> Self {
        let f = factor.abs();
        match self {
            TailBound::Exact => TailBound::Exact,
            TailBound::Polynomial { c, alpha } => TailBound::Polynomial { c: c * f, alpha: alpha + shift },
            TailBound::Empirical { c, alpha } => TailBound::Empirical { c: c * f, alpha: alpha + shift },
            // n^shift ≤ e^{max(shift,0)·√n} only loosely; keep it safe by folding
            // a positive shift into beta via n^s ≤ (2s)^{2s} e^{√n} bounds.
            TailBound::SubExponential { c, beta } => {
                if shift <= 0.0 {
                    TailBound::SubExponential { c: c * f, beta }
                } else {
                    let extra = (2.0 * shift).powf(2.0 * shift);
                    TailBound::SubExponential { c: c * f * extra, beta: beta + 1.0 }
                }
            }
        }
    }

    /// Natural log of the bound on `Σ_{n > last} |a(n)|·r^n` where `ln r = log_r < 0`.
    pub fn log_tail(&self, last: i64, log_r: f64) -> f64 {
        let n0 = (last + 1).max(1) as f64;
        let (log_first, log_ratio) = match *self {
            TailBound::Exact => return f64::NEG_INFINITY,
            TailBound::Polynomial { c, alpha } | TailBound::Empirical { c, alpha } => {
                if c == 0.0 {
                    return f64::NEG_INFINITY;
                }
                let growth = alpha.max(0.0) * ((n0 + 1.0) / n0).ln();
                (c.ln() + alpha * n0.ln() + n0 * log_r, growth + log_r)
            }
            TailBound::SubExponential { c, beta } => {
                if c == 0.0 {
                    return f64::NEG_INFINITY;
                }
                let growth = beta * ((n0 + 1.0).sqrt() - n0.sqrt());
                (c.ln() + beta * n0.sqrt() + n0 * log_r, growth + log_r)
            }
        };
        if log_ratio >= 0.0 {
            return f64::INFINITY;
        }
        log_first - (-log_ratio.exp()).ln_1p()
    }
}

/// A q-expansion `Σ_{n_min ≤ n ≤ n_max} a(n) qⁿ` with coefficients rounded to a
/// fixed precision, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub struct NumericSeries {
    pub weight: i32,
    pub n_min: i64,
    pub coeffs: Vec<Complex>,
    pub tail: TailBound,
    /// Whether the series is a level-1 modular object of its weight, so that
    /// `f(z) = z^{-k} f(-1/z)` may be used.
    pub modular: bool,
}

impl NumericSeries {
    pub fn new(weight: i32, n_min: i64, coeffs: Vec<Complex>, tail: TailBound, modular: bool) -> Self {
        Self { weight, n_min, coeffs, tail, modular }
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, n: i64) -> Option<&Complex> {
        if n < self.n_min {
            return None;
        }
        self.coeffs.get((n - self.n_min) as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Complex::is_zero) && self.tail == TailBound::Exact
    }

    /// The series with every coefficient multiplied by `c`.
    pub fn scaled(&self, c: &Complex) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Self { coeffs, tail: self.tail.rescaled(c.abs_f64(), 0.0), ..self.clone() }
    }

    /// `f^c(z) = conj(f(-z̄))`: conjugated coefficients.
    pub fn conjugate(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(Complex::conj).collect(), ..self.clone() }
    }

    /// `D^{k-1}` on a weight `2-k` series: `a(n) ↦ n^{k-1} a(n)`.
    pub fn bol(&self) -> Result<Self> {
        let k = bol_target(self.weight)?;
        let coeffs = (self.n_min..)
            .zip(&self.coeffs)
            .map(|(n, a)| pow_n(a, n, k - 1))
            .collect();
        let tail = self.tail.rescaled(1.0, (k - 1) as f64);
        Ok(Self { weight: k, coeffs, tail, ..self.clone() })
    }

    /// Direct summation at `z`, no modular transformation.
    pub fn sum_at(&self, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        if z.im <= 0 {
            return Err(Error::DomainError(format!("Im z = {} is not positive", z.im.to_f64())));
        }
        let p = ctx.prec();
        let two_pi_i = Complex::new(Float::new(p), pi(p) * 2u32);
        let q = (&two_pi_i * z).exp();
        let log_r = -2.0 * std::f64::consts::PI * z.im.to_f64();
        let cap = self.n_max().min(self.n_min + ctx.series_len.max(1) as i64 - 1).max(self.n_min);
        let mut qn = q.powi(self.n_min);
        let mut acc = Complex::zero(p);
        let log_eps = ctx.trunc_eps().ln();
        // Early exit must also bound the stored coefficients past `n`.
        let stop_bound = match self.tail {
            TailBound::Exact => {
                let c = self.coeffs.iter().map(Complex::abs_f64).fold(0.0, f64::max);
                TailBound::Polynomial { c, alpha: 0.0 }
            }
            t => t,
        };
        for (n, a) in (self.n_min..=cap).zip(&self.coeffs) {
            if !a.is_zero() {
                acc += a * &qn;
            }
            if n >= 1 {
                // Relative to the partial sum; MPFR keeps the log finite far below f64 range.
                let scale = if acc.is_zero() { f64::NEG_INFINITY } else { acc.abs().ln().to_f64() };
                if n < cap && stop_bound.log_tail(n, log_r) <= log_eps + scale {
                    return Ok(acc);
                }
            }
            qn *= &q;
        }
        let tail = self.tail.log_tail(cap, log_r).exp();
        let tol = ctx.tol_tight * acc.abs_f64().max(1.0);
        if tail > tol || tail.is_nan() {
            return Err(Error::TailTooLarge { tail, tol });
        }
        Ok(acc)
    }

    /// Value at `z`; modular series with `Im z < 0.5` are first moved into the
    /// standard fundamental domain.
    pub fn evaluate(&self, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        if z.im <= 0 {
            return Err(Error::DomainError(format!("Im z = {} is not positive", z.im.to_f64())));
        }
        if !self.modular || z.im >= S_FALLBACK_HEIGHT {
            return self.sum_at(z, ctx);
        }
        let (w, factor) = reduce_with_factor(z, self.weight)?;
        Ok(&factor * &self.sum_at(&w, ctx)?)
    }
}

fn pow_n(a: &Complex, n: i64, e: i32) -> Complex {
    let p = a.prec();
    a.scale(&Float::with_val(p, Float::with_val(p, n).pow_i(e)))
}

trait PowI {
    fn pow_i(self, e: i32) -> Float;
}

impl PowI for Float {
    fn pow_i(self, e: i32) -> Float {
        use rug::ops::Pow;
        self.pow(e)
    }
}

/// `D^{k-1}` maps weight `2-k` to weight `k`; returns `k`.
pub(crate) fn bol_target(weight: i32) -> Result<i32> {
    if weight > 0 || weight % 2 != 0 {
        return Err(Error::WeightMismatch(format!(
            "Bol operator needs an even weight 2-k <= 0, got {weight}"
        )));
    }
    Ok(2 - weight)
}

/// Moves `z` to `w` with `Im w ≥ √3/2` using `T` and `S`, returning `w` and the
/// factor `c` with `f(z) = c·f(w)` for any weight-`k` level-1 modular `f`.
pub fn reduce_with_factor(z: &Complex, k: i32) -> Result<(Complex, Complex)> {
    let p = z.prec();
    let mut w = z.clone();
    let mut factor = Complex::one(p);
    for _ in 0..10_000 {
        let shift = Float::with_val(p, w.re.round_ref());
        w.re -= &shift;
        if w.norm_sqr() >= 1u32 {
            return Ok((w, factor));
        }
        // f(w) = w^{-k} f(-1/w)
        factor = &factor * &w.powi(-(k as i64));
        w = -w.recip();
    }
    Err(Error::NonConvergent("reduction to the fundamental domain".into()))
}
