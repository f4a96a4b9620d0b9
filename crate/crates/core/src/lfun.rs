//! L-values of level-1 cusp forms.

use rug::Float;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{decimal, pi, Complex, PrecisionContext};
use crate::qforms::{QSeries, TailBound};
use crate::special::{gamma_complex, upper_incomplete_gamma_complex};

/// How an [`LValue`] was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LMethod {
    Dirichlet,
    Completed,
    /// Limit of derivatives of the mock period function at 0.
    MockPeriod,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LValue {
    pub s: Complex,
    pub value: Complex,
    pub method: LMethod,
    /// Bound on the truncation error of `value`.
    pub est_error: f64,
}

impl Serialize for LValue {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let digits = self.value.prec() as usize * 3 / 10;
        let pair = |z: &Complex| [decimal(&z.re, digits), decimal(&z.im, digits)];
        let mut st = ser.serialize_struct("LValue", 4)?;
        st.serialize_field("s", &pair(&self.s))?;
        st.serialize_field("value", &pair(&self.value))?;
        st.serialize_field("method", &self.method)?;
        st.serialize_field("est_error", &format!("{:.3e}", self.est_error))?;
        st.end()
    }
}

/// `Σ_{n > last} c·n^{alpha−σ}` bounded by the integral from `last`; `None`
/// when the bound does not converge.
fn dirichlet_tail(tail: TailBound, last: i64, sigma: f64) -> Option<f64> {
    let (c, alpha) = match tail {
        TailBound::Exact => return Some(0.0),
        TailBound::Polynomial { c, alpha } | TailBound::Empirical { c, alpha } => (c, alpha),
        TailBound::SubExponential { .. } => return None,
    };
    let e = sigma - alpha - 1.0;
    if e <= 0.0 || last < 1 {
        return None;
    }
    Some(c * (last as f64).powf(-e) / e)
}

/// Smallest window `N` whose Dirichlet tail at `Re s = sigma` is at most `tol`.
pub fn dirichlet_terms_needed(tail: TailBound, sigma: f64, tol: f64) -> Option<usize> {
    let (c, alpha) = match tail {
        TailBound::Exact => return Some(1),
        TailBound::Polynomial { c, alpha } | TailBound::Empirical { c, alpha } => (c, alpha),
        TailBound::SubExponential { .. } => return None,
    };
    let e = sigma - alpha - 1.0;
    if e <= 0.0 {
        return None;
    }
    Some(((c / (e * tol)).powf(1.0 / e)).ceil().max(1.0) as usize)
}

fn check_cusp(f: &QSeries) -> Result<()> {
    if f.n_min() < 1 {
        return Err(Error::DomainError("L-series needs a cusp form (n_min >= 1)".into()));
    }
    Ok(())
}

/// `Σ_{n ≤ terms} a(n) n^{−s}` with the certified tail beyond `terms` as `est_error`.
pub fn l_dirichlet_partial(f: &QSeries, s: &Complex, terms: usize, ctx: &PrecisionContext) -> Result<LValue> {
    check_cusp(f)?;
    let p = ctx.prec();
    let wp = p + 16;
    let last = (terms as i64).min(f.n_max());
    let sw = s.with_prec(wp);
    let real = s.im.is_zero();
    let mut acc = Complex::zero(wp);
    for (n, a) in f.terms().take_while(|(n, _)| *n <= last) {
        if a.is_zero() {
            continue;
        }
        let ln_n = Float::with_val(wp, n).ln();
        let ns = if real {
            Complex::from_real((-Float::with_val(wp, &ln_n * &sw.re)).exp())
        } else {
            (-sw.scale(&ln_n)).exp()
        };
        acc += &a.to_complex(wp) * &ns;
    }
    let tail = if last >= f.n_max() && f.tail() == TailBound::Exact {
        0.0
    } else {
        dirichlet_tail(f.tail(), last, s.re.to_f64()).unwrap_or(f64::INFINITY)
    };
    Ok(LValue { s: s.with_prec(p), value: acc.with_prec(p), method: LMethod::Dirichlet, est_error: tail })
}

/// `L_f(s)` by direct summation over the stored window, for
/// `Re s > (k+1)/2 + 1`.
pub fn l_dirichlet(f: &QSeries, s: &Complex, ctx: &PrecisionContext) -> Result<LValue> {
    let k = f.weight() as f64;
    let sigma = s.re.to_f64();
    if sigma <= (k + 1.0) / 2.0 + 1.0 {
        return Err(Error::OutOfRegion(format!("Re s = {sigma} <= {}", (k + 1.0) / 2.0 + 1.0)));
    }
    let r = l_dirichlet_partial(f, s, f.n_max().max(1) as usize, ctx)?;
    let scale = r.value.abs_f64().max(1.0);
    if r.est_error > ctx.tol_tight * scale {
        return Err(Error::TailTooLarge { tail: r.est_error, tol: ctx.tol_tight * scale });
    }
    Ok(r)
}

/// `Λ(s) = (2π)^{−s} Γ(s) L_f(s) = Σ a(n)[Γ(s,2πn)(2πn)^{−s} + i^k Γ(k−s,2πn)(2πn)^{s−k}]`,
/// with the truncation bound.
pub fn completed_lambda(f: &QSeries, s: &Complex, ctx: &PrecisionContext) -> Result<(Complex, f64)> {
    check_cusp(f)?;
    let p = ctx.prec();
    let wp = p + 20;
    let inner = PrecisionContext { digits: ctx.digits + 6, ..ctx.clone() };
    let k = f.weight();
    let sw = s.with_prec(wp);
    let ks = &Complex::from_int(wp, k as i64) - &sw;
    let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
    let two_pi = Float::with_val(wp, pi(wp) * 2u32);
    let sigma = s.re.to_f64();
    let big = sigma.abs().max((k as f64 - sigma).abs()) + 2.0;
    let log_eps = ctx.trunc_eps().ln();
    let (c, alpha) = match f.tail() {
        TailBound::Polynomial { c, alpha } | TailBound::Empirical { c, alpha } => (c, alpha),
        TailBound::Exact => (0.0, 0.0),
        TailBound::SubExponential { .. } => {
            return Err(Error::DomainError("completed L-series needs polynomially bounded coefficients".into()))
        }
    };
    // Bound on one term at index n: c n^alpha · 2 · 2e^{−x}/x with x = 2πn ≥ 2(|σ|+1).
    let log_term_bound = |n: f64| {
        let x = 2.0 * std::f64::consts::PI * n;
        c.ln() + alpha * n.ln() + (4.0f64).ln() - x - x.ln()
    };
    let mut acc = Complex::zero(wp);
    // Σ|terms|: the scale for relative truncation, robust when Λ(s) vanishes.
    let mut mag = 0f64;
    let mut last = 0i64;
    for (n, a) in f.terms() {
        last = n;
        if !a.is_zero() {
            let x = Float::with_val(wp, &two_pi * n);
            let ln_x = Float::with_val(wp, x.ln_ref());
            let g1 = upper_incomplete_gamma_complex(&sw, &x, &inner)?.with_prec(wp);
            let g2 = upper_incomplete_gamma_complex(&ks, &x, &inner)?.with_prec(wp);
            let t1 = &g1 * &(-sw.scale(&ln_x)).exp();
            let t2 = &g2 * &(-ks.scale(&ln_x)).exp();
            let an = a.to_complex(wp);
            mag += an.abs_f64() * (t1.abs_f64() + t2.abs_f64());
            let term = if sign > 0 { t1 + t2 } else { t1 - t2 };
            acc += &an * &term;
        }
        let nf = (n + 1) as f64;
        if 2.0 * std::f64::consts::PI * nf > 2.0 * big && c > 0.0 {
            // Geometric tail with ratio ≤ ½ doubles the first bound.
            let log_tail = log_term_bound(nf) + (2.0f64).ln();
            if log_tail <= log_eps + mag.max(1e-300).ln() {
                return Ok((acc.with_prec(p), log_tail.exp()));
            }
        }
    }
    if f.tail() == TailBound::Exact {
        return Ok((acc.with_prec(p), 0.0));
    }
    let nf = (last + 1) as f64;
    let tail = if 2.0 * std::f64::consts::PI * nf > 2.0 * big { (log_term_bound(nf) + 2f64.ln()).exp() } else { f64::INFINITY };
    let tol = ctx.tol_tight * mag;
    if tail > tol {
        return Err(Error::TailTooLarge { tail, tol });
    }
    Ok((acc.with_prec(p), tail))
}

/// `L_f(s)` for any complex `s` through the completed series; at poles of
/// `Γ(s)` the value is 0 since `Λ` is entire.
pub fn l_completed(f: &QSeries, s: &Complex, ctx: &PrecisionContext) -> Result<LValue> {
    let p = ctx.prec();
    let (lambda, tail) = completed_lambda(f, s, ctx)?;
    let inner = PrecisionContext { digits: ctx.digits + 6, ..ctx.clone() };
    let value = match gamma_complex(s, &inner) {
        Ok(g) => {
            let wp = p + 20;
            let two_pi = Float::with_val(wp, pi(wp) * 2u32);
            let factor = s.with_prec(wp).scale(&Float::with_val(wp, two_pi.ln_ref())).exp() / g.with_prec(wp);
            (&lambda.with_prec(wp) * &factor).with_prec(p)
        }
        Err(Error::DomainError(_)) => Complex::zero(p),
        Err(e) => return Err(e),
    };
    let rel = if lambda.is_zero() { 0.0 } else { tail / lambda.abs_f64() };
    let est_error = if rel.is_finite() { rel * value.abs_f64() } else { tail } + value.abs_f64() * 2f64.powi(-(p as i32) + 8);
    Ok(LValue { s: s.with_prec(p), value, method: LMethod::Completed, est_error })
}

/// Critical values `L_f(1), …, L_f(k−1)`.
pub fn critical_values(f: &QSeries, ctx: &PrecisionContext) -> Result<Vec<LValue>> {
    let p = ctx.prec();
    (1..f.weight() as i64).map(|j| l_completed(f, &Complex::from_int(p, j), ctx)).collect()
}
