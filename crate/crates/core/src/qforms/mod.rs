//! Exact q-expansions of level-1 modular objects.
//!
//! Construction is done in exact rational arithmetic; [`QSeries::numeric`]
//! rounds once to the working precision for evaluation.

mod gauss;
mod io;
mod numeric;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Complex, PrecisionContext};
use crate::special::bernoulli;

pub use gauss::{parse_rational, GaussRational};
pub use numeric::{reduce_with_factor, NumericSeries, TailBound, S_FALLBACK_HEIGHT};

/// Weights whose cusp-form space is one-dimensional.
pub const DIM_ONE_WEIGHTS: [i32; 6] = [12, 16, 18, 20, 22, 26];

/// What is known about the modularity of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormKind {
    /// Holomorphic cusp form, `n_min ≥ 1`.
    Cusp,
    /// Holomorphic modular form with a constant term.
    Holomorphic,
    /// Modular with poles at the cusp.
    WeaklyHolomorphic,
    /// No modularity assumed (loaded from a file or built by hand).
    Generic,
}

/// `Σ_{n_min ≤ n ≤ N} a(n) qⁿ` with exact Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    weight: i32,
    n_min: i64,
    coeffs: Vec<GaussRational>,
    tail: TailBound,
    kind: FormKind,
}

impl QSeries {
    /// A hand-built series; modularity is not assumed.
    pub fn from_coeffs(weight: i32, n_min: i64, coeffs: Vec<GaussRational>, tail: TailBound) -> Self {
        Self { weight, n_min, coeffs, tail, kind: FormKind::Generic }
    }

    /// The zero cusp form of weight `k`, one stored coefficient.
    pub fn zero(weight: i32) -> Self {
        Self { weight, n_min: 1, coeffs: vec![GaussRational::zero()], tail: TailBound::Exact, kind: FormKind::Cusp }
    }

    fn real(weight: i32, n_min: i64, coeffs: Vec<Rational>, tail: TailBound, kind: FormKind) -> Self {
        let coeffs = coeffs.into_iter().map(GaussRational::from).collect();
        Self { weight, n_min, coeffs, tail, kind }
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    /// Largest stored index.
    pub fn n_max(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }

    pub fn tail(&self) -> TailBound {
        self.tail
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn is_cuspidal(&self) -> bool {
        self.kind == FormKind::Cusp
    }

    pub fn is_modular(&self) -> bool {
        self.kind != FormKind::Generic
    }

    pub fn coeffs(&self) -> &[GaussRational] {
        &self.coeffs
    }

    /// `a(n)`, zero outside the stored window below `n_min`.
    pub fn coeff(&self, n: i64) -> GaussRational {
        if n < self.n_min {
            return GaussRational::zero();
        }
        self.coeffs.get((n - self.n_min) as usize).cloned().unwrap_or_default()
    }

    /// Iterator over `(n, a(n))`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussRational)> {
        (self.n_min..).zip(self.coeffs.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(GaussRational::is_zero)
    }

    /// Marks the series as a modular object of the given kind.
    pub fn with_kind(mut self, kind: FormKind) -> Self {
        self.kind = kind;
        self
    }

    /// `c·f`.
    pub fn scale(&self, c: &GaussRational) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        let tail = self.tail.rescaled(c.abs_f64(), 0.0);
        Self { coeffs, tail, ..self.clone() }
    }

    /// `f + g` over the common window; weights must agree.
    pub fn add(&self, other: &QSeries) -> Result<Self> {
        if self.weight != other.weight {
            return Err(Error::WeightMismatch(format!("{} + {}", self.weight, other.weight)));
        }
        let lo = self.n_min.min(other.n_min);
        let hi = self.n_max().min(other.n_max());
        let coeffs = (lo..=hi).map(|n| &self.coeff(n) + &other.coeff(n)).collect();
        let tail = match (self.tail, other.tail) {
            (TailBound::Exact, t) | (t, TailBound::Exact) => t,
            (a, b) => sum_bounds(a, b),
        };
        let kind = if self.kind == other.kind { self.kind } else { FormKind::Generic };
        Ok(Self { weight: self.weight, n_min: lo, coeffs, tail, kind })
    }

    /// `f^c(z) = conj(f(-z̄))`: conjugated coefficients.
    pub fn conjugate(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(GaussRational::conj).collect(), ..self.clone() }
    }

    /// `D^{k-1}` on a weight `2-k` series: `a(n) ↦ n^{k-1} a(n)`, weight `k`.
    pub fn bol(&self) -> Result<Self> {
        let k = numeric::bol_target(self.weight)?;
        let coeffs = self
            .terms()
            .map(|(n, a)| a.scale(&Rational::from(Integer::from(n).pow(k as u32 - 1))))
            .collect();
        let tail = self.tail.rescaled(1.0, (k - 1) as f64);
        // D^{k-1} of a weakly holomorphic form is weakly holomorphic of weight k.
        Ok(Self { weight: k, coeffs, tail, ..self.clone() })
    }

    /// Rounds the coefficients to the working precision.
    pub fn numeric(&self, ctx: &PrecisionContext) -> NumericSeries {
        let p = ctx.prec();
        let coeffs = self.coeffs.iter().map(|a| a.to_complex(p)).collect();
        NumericSeries::new(self.weight, self.n_min, coeffs, self.tail, self.is_modular())
    }

    /// `f(z)`; see [`NumericSeries::evaluate`].
    pub fn evaluate(&self, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        self.numeric(ctx).evaluate(z, ctx)
    }
}

fn sum_bounds(a: TailBound, b: TailBound) -> TailBound {
    use TailBound::*;
    match (a, b) {
        (Polynomial { c: c1, alpha: a1 }, Polynomial { c: c2, alpha: a2 }) => {
            Polynomial { c: c1 + c2, alpha: a1.max(a2) }
        }
        (SubExponential { c: c1, beta: b1 }, SubExponential { c: c2, beta: b2 }) => {
            SubExponential { c: c1 + c2, beta: b1.max(b2) }
        }
        (Polynomial { c: c1, alpha: a1 } | Empirical { c: c1, alpha: a1 }, Polynomial { c: c2, alpha: a2 } | Empirical { c: c2, alpha: a2 }) => {
            Empirical { c: c1 + c2, alpha: a1.max(a2) }
        }
        // Mixed polynomial/sub-exponential: n^alpha ≤ (2 alpha)^{2 alpha} e^{√n}.
        (SubExponential { c: c1, beta }, Polynomial { c: c2, alpha } | Empirical { c: c2, alpha })
        | (Polynomial { c: c2, alpha } | Empirical { c: c2, alpha }, SubExponential { c: c1, beta }) => {
            let a = alpha.max(0.5);
            SubExponential { c: c1 + c2 * (2.0 * a).powf(2.0 * a), beta: beta.max(1.0) }
        }
        (Exact, t) | (t, Exact) => t,
    }
}

// ---------------------------------------------------------------------------
// Exact integer power-series helpers on index windows starting at 0.

fn mul_trunc(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Inverse of a power series with constant term 1.
#[cfg(test)]
fn inverse_unit(a: &[Integer], len: usize) -> Vec<Integer> {
    debug_assert!(a[0] == 1);
    let mut inv = vec![Integer::new(); len];
    inv[0] = Integer::from(1);
    for n in 1..len {
        let mut s = Integer::new();
        for j in 1..=n.min(a.len() - 1) {
            s += &a[j] * &inv[n - j];
        }
        inv[n] = -s;
    }
    inv
}

/// `a^e` for a series with constant term 1, by the recurrence
/// `n·P_n = Σ_{j=1}^{n} ((e+1)j − n)·a_j·P_{n−j}`; cost is linear in the
/// number of nonzero `a_j`.
fn power_unit(a: &[Integer], e: i64, len: usize) -> Vec<Integer> {
    debug_assert!(a[0] == 1);
    let support: Vec<usize> = (1..a.len().min(len)).filter(|&j| a[j] != 0).collect();
    let mut p = vec![Integer::new(); len];
    p[0] = Integer::from(1);
    for n in 1..len {
        let mut s = Integer::new();
        for &j in support.iter().take_while(|&&j| j <= n) {
            let w = (e + 1) * j as i64 - n as i64;
            if w != 0 {
                s += Integer::from(&a[j] * &p[n - j]) * w;
            }
        }
        debug_assert!(s.is_divisible_u(n as u32));
        p[n] = s / n as u32;
    }
    p
}

/// `σ_r(n)` for `n = 0..len`, with `σ_r(0) := 0`.
fn divisor_sums(r: u32, len: usize) -> Vec<Integer> {
    let mut s = vec![Integer::new(); len];
    for d in 1..len {
        let dr = Integer::from(d).pow(r);
        for m in (d..len).step_by(d) {
            s[m] += &dr;
        }
    }
    s
}

fn eisenstein_raw(k: u32, len: usize) -> Vec<Rational> {
    let factor = Rational::from(-2 * k as i64) / bernoulli(k);
    let sig = divisor_sums(k - 1, len);
    let mut out: Vec<Rational> = sig.into_iter().map(|s| Rational::from(s) * &factor).collect();
    out[0] = Rational::from(1);
    out
}

/// `E_k` for weights where `2k/B_k` is an integer (4, 6, 8, 10, 14).
fn eisenstein_int(k: u32, len: usize) -> Vec<Integer> {
    let factor = Rational::from(-2 * k as i64) / bernoulli(k);
    assert!(*factor.denom() == 1, "E_{k} is not integral");
    let factor = factor.numer().clone();
    let mut out: Vec<Integer> = divisor_sums(k - 1, len).into_iter().map(|s| s * &factor).collect();
    out[0] = Integer::from(1);
    out
}

/// The Jacobi triangular series `Σ_{m≥0} (-1)^m (2m+1) q^{m(m+1)/2} = Π(1-qⁿ)³`.
fn jacobi_cube(len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for m in 0usize.. {
        let e = m * (m + 1) / 2;
        if e >= len {
            break;
        }
        let v = (2 * m + 1) as i64;
        out[e] = Integer::from(if m % 2 == 0 { v } else { -v });
    }
    out
}

/// `Π_{n≥1}(1-qⁿ)^24` up to `q^{len-1}`.
fn eta24_over_q(len: usize) -> Vec<Integer> {
    power_unit(&jacobi_cube(len), 8, len)
}

fn to_rationals(v: Vec<Integer>) -> Vec<Rational> {
    v.into_iter().map(Rational::from).collect()
}

// ---------------------------------------------------------------------------
// Constructors.

fn check_even_weight(k: i32, min: i32) -> Result<u32> {
    if k < min || k % 2 != 0 {
        return Err(Error::UnsupportedWeight(k));
    }
    Ok(k as u32)
}

/// Normalized `E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) qⁿ`, indices `0..=n`.
pub fn eisenstein(k: i32, n: usize) -> Result<QSeries> {
    let ku = check_even_weight(k, 4)?;
    let coeffs = eisenstein_raw(ku, n + 1);
    // |a(n)| ≤ |2k/B_k|·ζ(k-1)·n^{k-1} and ζ(k-1) < 2.
    let c = 2.0 * (Rational::from(2 * k) / bernoulli(ku)).to_f64().abs();
    let tail = TailBound::Polynomial { c, alpha: (k - 1) as f64 };
    Ok(QSeries::real(k, 0, coeffs, tail, FormKind::Holomorphic))
}

/// Deligne: `|a(n)| ≤ d(n) n^{(k-1)/2} ≤ 2 n^{k/2}` for a normalized eigenform.
fn deligne(k: i32) -> TailBound {
    TailBound::Polynomial { c: 2.0, alpha: k as f64 / 2.0 }
}

/// `Δ = q Π(1-qⁿ)^24 = Σ τ(n) qⁿ`, indices `1..=n`.
pub fn delta(n: usize) -> Result<QSeries> {
    if n < 2 {
        return Err(Error::DomainError(format!("delta needs N >= 2, got {n}")));
    }
    let coeffs = to_rationals(eta24_over_q(n));
    Ok(QSeries::real(12, 1, coeffs, deligne(12), FormKind::Cusp))
}

/// The normalized eigenform `Δ·E_{k-12}` spanning `S_k` for `k` in [`DIM_ONE_WEIGHTS`].
pub fn cusp_form(k: i32, n: usize) -> Result<QSeries> {
    if !DIM_ONE_WEIGHTS.contains(&k) {
        return Err(Error::UnsupportedWeight(k));
    }
    let n = n.max(2);
    let eta = eta24_over_q(n);
    let coeffs = if k == 12 { eta } else { mul_trunc(&eta, &eisenstein_int((k - 12) as u32, n), n) };
    Ok(QSeries::real(k, 1, to_rationals(coeffs), deligne(k), FormKind::Cusp))
}

/// `S_k` basis for any even `k`: the eigenform when `dim S_k = 1`, the zero
/// form when `S_k = 0`, [`Error::UnsupportedWeight`] otherwise.
pub fn cusp_space_basis(k: i32, n: usize) -> Result<Option<QSeries>> {
    match k {
        k if DIM_ONE_WEIGHTS.contains(&k) => cusp_form(k, n).map(Some),
        2 | 4 | 6 | 8 | 10 | 14 => Ok(None),
        _ => Err(Error::UnsupportedWeight(k)),
    }
}

/// `E₄²E₆/Δ²`, weight -10, indices `-2..=n`.
pub fn weakly_holomorphic_m10(n: usize) -> Result<QSeries> {
    if n < 1 {
        return Err(Error::DomainError("weakly_holomorphic_m10 needs N >= 1".into()));
    }
    // Window length covering q^{-2} .. q^{n}.
    let len = n + 3;
    let e4 = eisenstein_int(4, len);
    let e6 = eisenstein_int(6, len);
    let num = mul_trunc(&mul_trunc(&e4, &e4, len), &e6, len);
    let inv_den = power_unit(&jacobi_cube(len), -16, len);
    let coeffs = to_rationals(mul_trunc(&num, &inv_den, len));
    let tail = fit_subexponential(&coeffs, -2, 4.0 * std::f64::consts::PI * 2f64.sqrt());
    Ok(QSeries::real(-10, -2, coeffs, tail, FormKind::WeaklyHolomorphic))
}

/// Coefficients of a form with a pole of order `m` grow like `e^{4π√(mn)}`;
/// `c` is fitted to the computed window with a safety factor.
fn fit_subexponential(coeffs: &[Rational], n_min: i64, beta: f64) -> TailBound {
    let c = (n_min..)
        .zip(coeffs)
        .filter(|(n, _)| *n >= 1)
        .map(|(n, a)| a.to_f64().abs().ln() - beta * (n as f64).sqrt())
        .filter(|v| v.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if c == f64::NEG_INFINITY {
        return TailBound::Exact;
    }
    TailBound::SubExponential { c: 10.0 * c.exp(), beta }
}

/// Polynomial bound fitted to the second half of the window; used for
/// series of unknown provenance.
pub(crate) fn fit_empirical(coeffs: &[GaussRational], n_min: i64) -> TailBound {
    let pos: Vec<(f64, f64)> = (n_min..)
        .zip(coeffs)
        .filter(|(n, a)| *n >= 2 && !a.is_zero())
        .map(|(n, a)| (n as f64, a.abs_f64()))
        .collect();
    if pos.is_empty() {
        return TailBound::Exact;
    }
    let half = pos.len() / 2;
    let alpha = pos[half..].iter().map(|(n, a)| a.ln().max(0.0) / n.ln()).fold(0.0, f64::max) + 1.0;
    let c = pos.iter().map(|(n, a)| a / n.powf(alpha)).fold(1.0, f64::max) * 2.0;
    TailBound::Empirical { c, alpha }
}

/// `f^c`; real-coefficient inputs come back unchanged.
pub fn conjugate_form(f: &QSeries) -> QSeries {
    f.conjugate()
}

/// `D^{k-1}` from weight `2-k` to weight `k`.
pub fn bol(f: &QSeries) -> Result<QSeries> {
    f.bol()
}
