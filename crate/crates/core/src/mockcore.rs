//! The mock period function `r_{f,2}`, its non-holomorphic correction and
//! completion, extraction of non-critical L-values, and residual checks of
//! the relations they satisfy.

use rayon::prelude::*;
use rug::Float;

use crate::eichler::{period_polynomial, pointwise_report, slash_sum, EichlerIntegral, GroupElement, PolynomialC};
use crate::error::{Error, Result};
use crate::kernel::{laplace_fd, pi, quad_ray, xi_fd, Complex, PrecisionContext, RayPath};
use crate::lfun::{LMethod, LValue};
use crate::qforms::{NumericSeries, QSeries, TailBound};
use crate::report::{scaled_residual, RelationReport};
use crate::special::upper_incomplete_gamma_scaled;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Largest derivative order accepted by [`MockPeriods::noncritical_lvalue`].
pub const MAX_DERIVATIVE: u32 = 6;

/// Richardson nodes on the positive real axis, plus the node used for the stability check.
pub const RICHARDSON_NODES: [f64; 3] = [1e-6, 1e-7, 1e-8];

/// Relative disagreement between the two Richardson estimates that is still accepted.
pub const RICHARDSON_TOL: f64 = 1e-9;

/// How `r̃_{f,2}` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TildeMethod {
    /// Finite double sum over critical L-values.
    Closed,
    /// Direct integral of `r_f(w)/(w+z)^k` along the ray from `−z̄`.
    Quadrature,
}

/// How `F_{f,2}` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum F2Method {
    /// `(k−2)! Σ a(n) Γ(1−k, 4πny) q^{−n}`.
    Termwise,
    /// `∫_{−z̄}^{i∞} F_f(w)(w+z)^{−k} dw`.
    Quadrature,
}

/// `r_{f,2}`, `r̃_{f,2}` and `r̂_{f,2} = r_{f,2} − r̃_{f,2}` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct MockPeriodEvaluation {
    pub z: Complex,
    pub r_f2: Complex,
    pub tilde: Complex,
    pub hat: Complex,
    pub tilde_method: TildeMethod,
}

/// Everything derived from one cusp form that the mock period objects need.
#[derive(Clone, Debug)]
pub struct MockPeriods {
    weight: i32,
    coeffs: NumericSeries,
    eichler: EichlerIntegral,
    /// `L_f(1), …, L_f(k−1)`.
    critical: Vec<Complex>,
    /// `r_{f^c}`.
    conj_period: PolynomialC,
}

fn factorial(n: u32, prec: u32) -> Float {
    Float::with_val(prec, Float::factorial(n))
}

fn check_upper(z: &Complex) -> Result<()> {
    if z.im <= 0 {
        return Err(Error::DomainError(format!("Im z = {} is not positive", z.im.to_f64())));
    }
    Ok(())
}

/// `(wz − 1)^{−e}`; the pole `w = 1/z` must stay off the imaginary axis.
fn kernel_power(w: &Complex, z: &Complex, e: i64) -> Result<Complex> {
    let d = (w * z).add_real(&Float::with_val(w.prec(), -1));
    if d.is_zero() {
        return Err(Error::PoleOnPath(format!("w = 1/z at z = {z}")));
    }
    Ok(d.powi(-e))
}

/// `r_f` from `L_f(1..k−1)` with the same coefficient formula as the period polynomial.
fn period_from_values(k: i32, vals: &[Complex], prec: u32) -> PolynomialC {
    let w = Complex::new(Float::new(prec), pi(prec) * 2u32);
    let kf = factorial(k as u32 - 2, prec);
    let mut coeffs = vec![Complex::zero(prec); (k - 1) as usize];
    for (n, l) in vals.iter().enumerate() {
        let j = k as usize - 2 - n;
        let c = (&w.powi(-(n as i64) - 1) * l).scale(&Float::with_val(prec, &kf / factorial(j as u32, prec)));
        coeffs[j] = -c;
    }
    PolynomialC::new(coeffs)
}

impl MockPeriods {
    /// Precomputes `F_f`, `r_f`, `r_{f^c}` and the critical values of a cusp form.
    pub fn new(f: &QSeries, ctx: &PrecisionContext) -> Result<Self> {
        let period = period_polynomial(f, ctx)?;
        let critical: Vec<Complex> = period.critical_values.iter().map(|l| l.value.clone()).collect();
        // L_{f^c}(s) = conj L_f(s) for real s.
        let conj_vals: Vec<Complex> = critical.iter().map(Complex::conj).collect();
        let conj_period = period_from_values(f.weight(), &conj_vals, ctx.prec());
        let eichler = EichlerIntegral::with_period(f, period.poly, ctx)?;
        Ok(Self { weight: f.weight(), coeffs: f.numeric(ctx), eichler, critical, conj_period })
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn eichler(&self) -> &EichlerIntegral {
        &self.eichler
    }

    /// `r_f`.
    pub fn period(&self) -> &PolynomialC {
        self.eichler.period()
    }

    /// `r_{f^c}`, the period polynomial of the form with conjugated coefficients.
    pub fn conjugate_period(&self) -> &PolynomialC {
        &self.conj_period
    }

    /// `L_f(1), …, L_f(k−1)`.
    pub fn critical_values(&self) -> &[Complex] {
        &self.critical
    }

    /// `F_{f,2}(z)` by the chosen method.
    pub fn f_f2(&self, z: &Complex, method: F2Method, ctx: &PrecisionContext) -> Result<Complex> {
        check_upper(z)?;
        match method {
            F2Method::Termwise => self.f_f2_termwise(z, ctx),
            F2Method::Quadrature => {
                let k = self.weight as i64;
                let integrand = |w: &Complex| Ok(&self.eichler.evaluate(w, ctx)? * &(w + z).powi(-k));
                quad_ray(integrand, &RayPath::vertical(-z.conj()), TWO_PI, ctx)
            }
        }
    }

    // Γ(1−k, x) ≤ x^{−k}e^{−x} bounds term n by (k−2)!|a(n)|(4πny)^{−k}e^{−2πny}.
    fn f_f2_termwise(&self, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        let p = ctx.prec();
        let k = self.weight;
        let s = &self.coeffs;
        if s.is_zero() {
            return Ok(Complex::zero(p));
        }
        let y = z.im.to_f64();
        let four_pi_y = Float::with_val(p, pi(p) * 4u32) * &z.im;
        let order = Float::with_val(p, 1 - k);
        // e^{2πny}Γ(1−k, 4πny) times e^{−2πny − 2πinx} = (e^{−2πi z̄})^n.
        let minus_two_pi_i = Complex::new(Float::new(p), pi(p) * -2i32);
        let step = (&minus_two_pi_i * &z.conj()).exp();
        let prefactor = (4.0 * std::f64::consts::PI * y).powi(-k);
        let stop_bound = match s.tail {
            TailBound::Exact => {
                let c = s.coeffs.iter().map(Complex::abs_f64).fold(0.0, f64::max);
                TailBound::Polynomial { c, alpha: 0.0 }
            }
            t => t,
        }
        .rescaled(prefactor, -k as f64);
        let log_r = -TWO_PI * y;
        let log_eps = ctx.trunc_eps().ln();
        let cap = s.n_max().min(s.n_min + ctx.series_len.max(1) as i64 - 1);
        let mut acc = Complex::zero(p);
        let mut qn = step.powi(s.n_min);
        let mut last = s.n_min - 1;
        for (n, a) in (s.n_min..=cap).zip(&s.coeffs) {
            last = n;
            if !a.is_zero() {
                let x = Float::with_val(p, &four_pi_y * n);
                let g = upper_incomplete_gamma_scaled(&order, &x, ctx)?;
                acc += (a * &qn).scale(&g);
            }
            let scale = if acc.is_zero() { f64::NEG_INFINITY } else { acc.abs().ln().to_f64() };
            if n < cap && stop_bound.log_tail(n, log_r) <= log_eps + scale {
                break;
            }
            qn *= &step;
        }
        if last == cap {
            let tail = s.tail.rescaled(prefactor, -k as f64).log_tail(cap, log_r).exp();
            let tol = ctx.tol_tight * acc.abs_f64().max(1.0);
            if tail > tol || tail.is_nan() {
                return Err(Error::TailTooLarge { tail, tol });
            }
        }
        Ok(acc.scale(&factorial(k as u32 - 2, p)))
    }

    /// `r_{f,2}(z) = ∫_0^{i∞} F_f(w)(wz − 1)^{−k} dw`.
    pub fn r_f2(&self, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        check_upper(z)?;
        self.r_f2_derivative(z, 0, ctx)
    }

    /// `d^m/dz^m r_{f,2}(z) = (−1)^m (k)_m ∫_0^{i∞} F_f(w) w^m (wz − 1)^{−k−m} dw`,
    /// also valid for real `z > 0`.
    fn r_f2_derivative(&self, z: &Complex, m: u32, ctx: &PrecisionContext) -> Result<Complex> {
        let p = ctx.prec();
        if self.coeffs.is_zero() {
            return Ok(Complex::zero(p));
        }
        if z.im < 0 || (z.im == 0 && z.re <= 0) {
            return Err(Error::DomainError(format!("r_f2 needs Im z > 0 or z > 0, got {z}")));
        }
        // The pole w = 1/z lies on the ray only for z on the negative imaginary axis.
        if z.re == 0 && z.im < 0 {
            return Err(Error::PoleOnPath(format!("w = 1/z on the integration ray at z = {z}")));
        }
        let e = self.weight as i64 + m as i64;
        let integrand = |w: &Complex| Ok(&(&self.eichler.evaluate(w, ctx)? * &w.powi(m as i64)) * &kernel_power(w, z, e)?);
        let integral = quad_ray(integrand, &RayPath::vertical(Complex::zero(p)), TWO_PI, ctx)?;
        let poch = (0..m).fold(Float::with_val(p, 1), |acc, j| acc * (self.weight as u32 + j));
        let signed = if m % 2 == 1 { -poch } else { poch };
        Ok(integral.scale(&signed))
    }

    /// `r̃_{f,2}(z) = ∫_{−z̄}^{i∞} r_f(w)(w+z)^{−k} dw`.
    ///
    /// The closed form is
    /// `−(k−2)! Σ_{n,ℓ} L_f(n+1)/(ℓ!(k−2−n−ℓ)!(1+n+ℓ)) (−2πiz)^ℓ (−4πy)^{−1−n−ℓ}`.
    pub fn tilde_r_f2(&self, z: &Complex, method: TildeMethod, ctx: &PrecisionContext) -> Result<Complex> {
        check_upper(z)?;
        let p = ctx.prec();
        let k = self.weight;
        match method {
            TildeMethod::Quadrature => {
                let r = self.period();
                let integrand = |w: &Complex| Ok(&r.eval(w) * &(w + z).powi(-(k as i64)));
                quad_ray(integrand, &RayPath::vertical(-z.conj()), 0.0, ctx)
            }
            TildeMethod::Closed => {
                let top = (k - 2) as usize;
                let two_pi = Float::with_val(p, pi(p) * 2u32);
                let a = (z * &Complex::new(Float::new(p), -two_pi.clone())).clone(); // −2πiz
                let b = Complex::from_real(-(Float::with_val(p, &two_pi * 2u32) * &z.im)); // −4πy
                let binv = b.recip();
                let a_pows: Vec<Complex> = std::iter::successors(Some(Complex::one(p)), |x| Some(x * &a)).take(top + 1).collect();
                let b_pows: Vec<Complex> =
                    std::iter::successors(Some(binv.clone()), |x| Some(x * &binv)).take(top + 1).collect();
                let facts: Vec<Float> = (0..=top as u32).map(|j| factorial(j, p)).collect();
                let mut acc = Complex::zero(p);
                for (n, l) in self.critical.iter().enumerate() {
                    for ell in 0..=top - n {
                        let denom = Float::with_val(p, &facts[ell] * &facts[top - n - ell]) * (1 + n + ell) as u32;
                        acc += (&(l * &a_pows[ell]) * &b_pows[n + ell]).div_real(&denom);
                    }
                }
                Ok(-acc.scale(&facts[top]))
            }
        }
    }

    /// `r̂_{f,2} = r_{f,2} − r̃_{f,2}`.
    pub fn hat_r_f2(&self, z: &Complex, method: TildeMethod, ctx: &PrecisionContext) -> Result<MockPeriodEvaluation> {
        let r_f2 = self.r_f2(z, ctx)?;
        let tilde = self.tilde_r_f2(z, method, ctx)?;
        let hat = &r_f2 - &tilde;
        Ok(MockPeriodEvaluation { z: z.clone(), r_f2, tilde, hat, tilde_method: method })
    }

    /// `r̂_{f,2}(z)` with the closed-form correction.
    pub fn hat(&self, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        Ok(self.hat_r_f2(z, TildeMethod::Closed, ctx)?.hat)
    }

    /// `(2i)^{1−k} r_{f^c}(z)`, the predicted `ξ_k`-image of `r̂_{f,2}`.
    pub fn xi_image(&self, z: &Complex) -> Complex {
        let p = z.prec();
        let two_i = Complex::new(Float::new(p), Float::with_val(p, 2));
        &two_i.powi(1 - self.weight as i64) * &self.conj_period.eval(z)
    }

    /// `L_f(k+m)` from `lim_{z→0⁺} d^m/dz^m r_{f,2}(z)
    ///   = i^{k+m} (m+k−1)! m! / ((k−1)(2π)^{m+k}) · L_f(k+m)`.
    ///
    /// The limit is a linear Richardson extrapolation from two small real
    /// nodes, cross-checked against the next smaller pair.
    pub fn noncritical_lvalue(&self, m: u32, ctx: &PrecisionContext) -> Result<LValue> {
        if m > MAX_DERIVATIVE {
            return Err(Error::DomainError(format!("derivative order {m} exceeds {MAX_DERIVATIVE}")));
        }
        let p = ctx.prec();
        let k = self.weight;
        let s = Complex::from_int(p, (k as u32 + m) as i64);
        if self.coeffs.is_zero() {
            return Ok(LValue { s, value: Complex::zero(p), method: LMethod::MockPeriod, est_error: 0.0 });
        }
        let nodes: Vec<Float> = RICHARDSON_NODES.iter().map(|&e| ctx.float(e)).collect();
        let vals = nodes
            .par_iter()
            .map(|e| self.r_f2_derivative(&Complex::from_real(e.clone()), m, ctx))
            .collect::<Result<Vec<_>>>()?;
        let extrapolate = |i: usize, j: usize| -> Complex {
            // Linear model r(ε) = r₀ + c ε through two nodes.
            let num = &vals[j].scale(&nodes[i]) - &vals[i].scale(&nodes[j]);
            num.div_real(&Float::with_val(p, &nodes[i] - &nodes[j]))
        };
        let coarse = extrapolate(0, 1);
        let fine = extrapolate(1, 2);
        let disagreement = scaled_residual(&coarse, &fine);
        if disagreement.is_nan() || disagreement > RICHARDSON_TOL {
            return Err(Error::ExtrapolationUnstable(format!(
                "m = {m}: estimates differ by {disagreement:e} (limit {RICHARDSON_TOL:e})"
            )));
        }
        // Constant i^{k+m} (m+k−1)! m! / ((k−1)(2π)^{m+k}).
        let i_pow = Complex::i(p).powi((k as u32 + m) as i64);
        let two_pi = Float::with_val(p, pi(p) * 2u32);
        let magnitude = Float::with_val(p, factorial(m + k as u32 - 1, p) * factorial(m, p))
            / (Float::with_val(p, k - 1) * Float::with_val(p, two_pi.pow_i((m + k as u32) as i64)));
        let constant = i_pow.scale(&magnitude);
        Ok(LValue { s, value: &coarse / &constant, method: LMethod::MockPeriod, est_error: disagreement })
    }

    /// `F_{f,2}|_k(S − 1)(z) − r̂_{f,2}(z)` at each point.
    pub fn verify_superm(&self, pts: &[Complex], ctx: &PrecisionContext) -> Result<RelationReport> {
        let k = self.weight as i64;
        let lhs = |z: &Complex| {
            let sz = -z.recip();
            Ok(&(&self.f_f2(&sz, F2Method::Termwise, ctx)? * &z.powi(-k)) - &self.f_f2(z, F2Method::Termwise, ctx)?)
        };
        let rhs = |z: &Complex| self.hat(z, ctx);
        pointwise_report("F_f2|(S-1) = hat r_f2", lhs, rhs, pts, ctx.tol_tight)
    }

    /// The three families of the completion relations: `r̂|(1+S) = 0`,
    /// `r̂|(1+U+U²) = 0` (relative to the largest summand, at `tol_tight`),
    /// and `ξ_k r̂ = (2i)^{1−k} r_{f^c}` (at `tol_fd`).
    pub fn verify_w_k2(&self, pts: &[Complex], ctx: &PrecisionContext) -> Result<Vec<RelationReport>> {
        let hat = |z: &Complex| self.hat(z, ctx);
        let k = self.weight;
        let slash_family = |identity: &str, els: &[GroupElement]| -> Result<RelationReport> {
            let residuals = pts
                .par_iter()
                .map(|z| {
                    let (sum, scale) = slash_sum(&hat, k, els, z)?;
                    Ok(sum.abs_f64() / scale)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(RelationReport::new(identity, pts.to_vec(), residuals, ctx.tol_tight))
        };
        let one_s = slash_family("hat r_f2|(1+S) = 0", &[GroupElement::IDENTITY, GroupElement::S])?;
        let one_u = slash_family("hat r_f2|(1+U+U^2) = 0", &[GroupElement::IDENTITY, GroupElement::U, GroupElement::U2])?;
        let xi = pointwise_report(
            "xi_k hat r_f2 = (2i)^(1-k) r_fc",
            |z: &Complex| xi_fd(hat, k, z, ctx),
            |z: &Complex| Ok(self.xi_image(z)),
            pts,
            ctx.tol_fd,
        )?;
        Ok(vec![one_s, one_u, xi])
    }

    /// `|Δ_k r̂_{f,2}(z)|` relative to `max(1, |r̂_{f,2}(z)|)`, at `tol_fd`.
    pub fn verify_harmonic(&self, pts: &[Complex], ctx: &PrecisionContext) -> Result<RelationReport> {
        let hat = |z: &Complex| self.hat(z, ctx);
        let residuals = pts
            .par_iter()
            .map(|z| {
                let lap = laplace_fd(hat, self.weight, z, ctx)?;
                Ok(lap.abs_f64() / hat(z)?.abs_f64().max(1.0))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RelationReport::new("Delta_k hat r_f2 = 0", pts.to_vec(), residuals, ctx.tol_fd))
    }

    /// `∫_0^{i∞} r_f(w)(w+z)^{−k} dw`, the right side of the `(1+S)` relation.
    pub fn es_rhs_s(&self, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        let k = self.weight as i64;
        let r = self.period();
        let p = ctx.prec();
        quad_ray(|w: &Complex| Ok(&r.eval(w) * &(w + z).powi(-k)), &RayPath::vertical(Complex::zero(p)), 0.0, ctx)
    }

    /// `∫_{−1}^{i∞} r_f(w)(w+z)^{−k} dw + ∫_{−1}^0 (r_f|_{2−k}Ũ)(w)(w+z)^{−k} dw`.
    ///
    /// The second path runs through `−½ + ½i`; the integrand is a polynomial over
    /// `(w+z)^k` with its pole in the lower half-plane.
    pub fn es_rhs_u(&self, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        let k = self.weight;
        let p = ctx.prec();
        let r = self.period();
        let rt = r.slash(2 - k, GroupElement::U_TILDE)?;
        let minus_one = Complex::from_int(p, -1);
        let up = quad_ray(|w: &Complex| Ok(&r.eval(w) * &(w + z).powi(-(k as i64))), &RayPath::vertical(minus_one.clone()), 0.0, ctx)?;
        let arc = RayPath::polyline(vec![minus_one, Complex::from_f64(p, -0.5, 0.5), Complex::zero(p)]);
        let across = quad_ray(|w: &Complex| Ok(&rt.eval(w) * &(w + z).powi(-(k as i64))), &arc, 0.0, ctx)?;
        Ok(up + across)
    }

    /// Both relations satisfied by `r_{f,2}`:
    /// `r_{f,2}|(1+S) = ∫_0^{i∞} r_f(w)/(w+z)^k dw` and the `(1+U+U²)` one.
    pub fn verify_mock_es(&self, pts: &[Complex], ctx: &PrecisionContext) -> Result<Vec<RelationReport>> {
        let r2 = |z: &Complex| self.r_f2(z, ctx);
        let k = self.weight;
        let one_s = pointwise_report(
            "r_f2|(1+S) = int_0^i00 r_f(w)(w+z)^-k dw",
            |z: &Complex| Ok(slash_sum(&r2, k, &[GroupElement::IDENTITY, GroupElement::S], z)?.0),
            |z: &Complex| self.es_rhs_s(z, ctx),
            pts,
            ctx.tol_tight,
        )?;
        let one_u = pointwise_report(
            "r_f2|(1+U+U^2) = int_-1^i00 r_f/(w+z)^k + int_-1^0 (r_f|U~)/(w+z)^k",
            |z: &Complex| Ok(slash_sum(&r2, k, &[GroupElement::IDENTITY, GroupElement::U, GroupElement::U2], z)?.0),
            |z: &Complex| self.es_rhs_u(z, ctx),
            pts,
            ctx.tol_tight,
        )?;
        Ok(vec![one_s, one_u])
    }
}

trait PowI {
    fn pow_i(self, e: i64) -> Float;
}

impl PowI for Float {
    fn pow_i(self, e: i64) -> Float {
        use rug::ops::Pow;
        self.pow(e as i32)
    }
}

/// `F_{f,2}(z)`, computed termwise.
pub fn f_f2(f: &QSeries, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    MockPeriods::new(f, ctx)?.f_f2(z, F2Method::Termwise, ctx)
}

/// `r_{f,2}(z)`.
pub fn r_f2(f: &QSeries, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    MockPeriods::new(f, ctx)?.r_f2(z, ctx)
}

/// `r̃_{f,2}(z)`.
pub fn tilde_r_f2(f: &QSeries, z: &Complex, method: TildeMethod, ctx: &PrecisionContext) -> Result<Complex> {
    MockPeriods::new(f, ctx)?.tilde_r_f2(z, method, ctx)
}

/// `r̂_{f,2}(z)` with the closed-form correction.
pub fn hat_r_f2(f: &QSeries, z: &Complex, ctx: &PrecisionContext) -> Result<MockPeriodEvaluation> {
    MockPeriods::new(f, ctx)?.hat_r_f2(z, TildeMethod::Closed, ctx)
}

/// `L_f(k+m)` through the mock period function.
pub fn noncritical_lvalue(f: &QSeries, m: u32, ctx: &PrecisionContext) -> Result<LValue> {
    MockPeriods::new(f, ctx)?.noncritical_lvalue(m, ctx)
}

pub fn verify_superm(f: &QSeries, pts: &[Complex], ctx: &PrecisionContext) -> Result<RelationReport> {
    MockPeriods::new(f, ctx)?.verify_superm(pts, ctx)
}

pub fn verify_w_k2(f: &QSeries, pts: &[Complex], ctx: &PrecisionContext) -> Result<Vec<RelationReport>> {
    MockPeriods::new(f, ctx)?.verify_w_k2(pts, ctx)
}

pub fn verify_mock_es(f: &QSeries, pts: &[Complex], ctx: &PrecisionContext) -> Result<Vec<RelationReport>> {
    MockPeriods::new(f, ctx)?.verify_mock_es(pts, ctx)
}
