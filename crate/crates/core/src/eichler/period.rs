//! Period polynomials and Eichler integrals.

use rug::Float;
use serde_json::{json, Value};

use super::PolynomialC;
use crate::error::{Error, Result};
use crate::kernel::{pi, quad_ray, Complex, PrecisionContext, RayPath};
use crate::lfun::{critical_values, LValue};
use crate::qforms::{NumericSeries, QSeries, TailBound};

/// `r_f` with the critical values it was assembled from.
#[derive(Clone, Debug)]
pub struct PeriodPolynomial {
    pub weight: i32,
    pub poly: PolynomialC,
    /// `L_f(1), …, L_f(k−1)`.
    pub critical_values: Vec<LValue>,
}

impl PeriodPolynomial {
    pub fn to_json(&self, digits: usize) -> Value {
        let vals: Vec<Value> = self
            .critical_values
            .iter()
            .enumerate()
            .map(|(i, l)| json!({ "s": i + 1, "value": [crate::kernel::decimal(&l.value.re, digits), crate::kernel::decimal(&l.value.im, digits)] }))
            .collect();
        json!({
            "weight": self.weight,
            "degree": self.poly.degree_bound(),
            "coefficients": self.poly.to_json(digits),
            "critical_values": vals,
        })
    }
}

fn factorial(n: u32, prec: u32) -> Float {
    Float::with_val(prec, Float::factorial(n))
}

fn two_pi_i(prec: u32) -> Complex {
    Complex::new(Float::new(prec), pi(prec) * 2u32)
}

fn check_cusp(f: &QSeries) -> Result<u32> {
    if !f.is_cuspidal() {
        return Err(Error::DomainError("period objects need a cusp form".into()));
    }
    let k = f.weight();
    if k < 4 || k % 2 != 0 {
        return Err(Error::UnsupportedWeight(k));
    }
    Ok(k as u32)
}

/// `r_f(z) = −(k−2)!/(2πi)^{k−1} Σ_{n=0}^{k−2} L_f(n+1)/(k−2−n)! (2πiz)^{k−2−n}`.
pub fn period_polynomial(f: &QSeries, ctx: &PrecisionContext) -> Result<PeriodPolynomial> {
    let k = check_cusp(f)?;
    let p = ctx.prec();
    let vals = critical_values(f, ctx)?;
    let w = two_pi_i(p);
    let kf = factorial(k - 2, p);
    let mut coeffs = vec![Complex::zero(p); (k - 1) as usize];
    for (n, l) in vals.iter().enumerate() {
        let j = k as usize - 2 - n;
        // −(k−2)!/j! · (2πi)^{−n−1} · L(n+1)
        let c = (&w.powi(-(n as i64) - 1) * &l.value).scale(&(Float::with_val(p, &kf / factorial(j as u32, p))));
        coeffs[j] = -c;
    }
    Ok(PeriodPolynomial { weight: k as i32, poly: PolynomialC::new(coeffs), critical_values: vals })
}

/// `∫_0^{i∞} f(w)(w − z₀)^{k−2} dw` by quadrature; the definitional oracle for [`period_polynomial`].
pub fn period_integral(f: &QSeries, z0: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let k = check_cusp(f)?;
    let fs = f.numeric(ctx);
    let integrand = |w: &Complex| Ok(&fs.evaluate(w, ctx)? * &(w - z0).powi(k as i64 - 2));
    let p = ctx.prec();
    quad_ray(integrand, &RayPath::vertical(Complex::zero(p)), 2.0 * std::f64::consts::PI, ctx)
}

/// `F_f(z) = ∫_z^{i∞} f(w)(w−z)^{k−2} dw = (k−2)!(−2πi)^{1−k} Σ a(n) n^{1−k} qⁿ`.
#[derive(Clone, Debug)]
pub struct EichlerIntegral {
    weight: i32,
    series: NumericSeries,
    period: PolynomialC,
}

impl EichlerIntegral {
    pub fn new(f: &QSeries, ctx: &PrecisionContext) -> Result<Self> {
        let period = period_polynomial(f, ctx)?.poly;
        Self::with_period(f, period, ctx)
    }

    /// Uses a precomputed `r_f`.
    pub fn with_period(f: &QSeries, period: PolynomialC, ctx: &PrecisionContext) -> Result<Self> {
        let k = check_cusp(f)?;
        let p = ctx.prec();
        let constant = Self::constant(k as i32, p);
        let coeffs = f
            .terms()
            .map(|(n, a)| {
                let nk = Float::with_val(p, Float::with_val(p, n).pow_i(1 - k as i32));
                (&a.to_complex(p) * &constant).scale(&nk)
            })
            .collect();
        let tail = match f.tail() {
            TailBound::Exact => TailBound::Exact,
            t => t.rescaled(constant.abs_f64(), 1.0 - k as f64),
        };
        let series = NumericSeries::new(2 - k as i32, f.n_min(), coeffs, tail, false);
        Ok(Self { weight: k as i32, series, period })
    }

    /// `(k−2)!(−2πi)^{1−k}`, the factor in front of `a(n) n^{1−k}`.
    pub fn constant(k: i32, prec: u32) -> Complex {
        (-two_pi_i(prec)).powi(1 - k as i64).scale(&factorial(k as u32 - 2, prec))
    }

    /// Weight of the cusp form `f`; `F_f` itself has weight `2 − k`.
    pub fn form_weight(&self) -> i32 {
        self.weight
    }

    pub fn series(&self) -> &NumericSeries {
        &self.series
    }

    pub fn period(&self) -> &PolynomialC {
        &self.period
    }

    /// `F_f(z)`: the q-series for `Im z ≥ 0.5`, below that the relation
    /// `F_f(z) = r_f(z) + z^{k−2} F_f(−1/z)` after unit translations.
    pub fn evaluate(&self, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        if z.im <= 0 {
            return Err(Error::DomainError("Eichler integral needs Im z > 0".into()));
        }
        let p = ctx.prec().max(z.prec());
        let mut w = z.clone();
        let mut acc = Complex::zero(p);
        let mut mult = Complex::one(p);
        for _ in 0..10_000 {
            let shift = Float::with_val(p, w.re.round_ref());
            w.re -= &shift;
            if w.im >= crate::qforms::S_FALLBACK_HEIGHT || w.norm_sqr() >= 1u32 {
                return Ok(acc + &mult * &self.series.sum_at(&w, ctx)?);
            }
            acc += &mult * &self.period.eval(&w);
            mult = &mult * &w.powi(self.weight as i64 - 2);
            w = -w.recip();
        }
        Err(Error::NonConvergent("Eichler integral reduction".into()))
    }
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
