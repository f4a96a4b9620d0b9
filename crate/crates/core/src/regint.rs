//! Regularized integrals of exponentially growing q-expansions and the
//! starred period functions built from them.
//!
//! `R.∫_{z₀}^{i∞} f(w) dw` is the value at `u = 0` of the continuation of
//! `∫_{z₀}^{i∞} e^{uw} f(w) dw` from `Im u ≫ 0`. Every principal term
//! `e^{2πinw}` is integrated in closed form as an incomplete gamma function,
//! continued along `u = δ + is`, `s: ∞ → 0`, `δ → 0⁺`; the remainder decays
//! and goes to the quadrature.

use rayon::prelude::*;
use rug::Float;

use crate::eichler::{pointwise_report, slash_sum, GroupElement, PolynomialC};
use crate::error::{Error, Result};
use crate::kernel::{pi, quad_ray, xi_fd, Complex, PrecisionContext, RayPath};
use crate::qforms::{NumericSeries, QSeries, S_FALLBACK_HEIGHT};
use crate::report::RelationReport;
use crate::special::incomplete_gamma_neg_int_on_sheet;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// A weight-`(2−k)` expansion `Σ_{n ≥ n_min} a(n) qⁿ` with finitely many
/// non-decaying terms, together with its cocycle `ρ = g|_{2−k}(1 − S)`.
#[derive(Clone, Debug)]
pub struct ExponentialQExpansion {
    series: NumericSeries,
    /// Terms with `n ≥ 1`, summed directly where no modular reduction is needed.
    tail: NumericSeries,
    cocycle: PolynomialC,
}

impl ExponentialQExpansion {
    /// A modular input; the cocycle vanishes.
    pub fn modular(g: &QSeries, ctx: &PrecisionContext) -> Result<Self> {
        if !g.is_modular() {
            return Err(Error::DomainError("expansion is not known to be modular; supply its cocycle".into()));
        }
        let k = 2 - g.weight();
        Self::with_cocycle(g, PolynomialC::zero(k.max(2) as usize - 2, ctx.prec()), ctx)
    }

    /// An input with `g|_{2−k}(1 − S) = cocycle`.
    pub fn with_cocycle(g: &QSeries, cocycle: PolynomialC, ctx: &PrecisionContext) -> Result<Self> {
        if g.weight() > 0 || g.weight() % 2 != 0 {
            return Err(Error::WeightMismatch(format!("expected weight 2 − k ≤ 0, got {}", g.weight())));
        }
        let mut series = g.numeric(ctx);
        series.modular = cocycle.is_zero() && g.is_modular();
        let skip = (1 - series.n_min).max(0) as usize;
        let tail_coeffs: Vec<Complex> = series.coeffs.iter().skip(skip).cloned().collect();
        let tail = NumericSeries::new(series.weight, series.n_min.max(1), tail_coeffs, series.tail, false);
        Ok(Self { series, tail, cocycle })
    }

    /// The kernel weight `k` that pairs with this expansion.
    pub fn kernel_weight(&self) -> i32 {
        2 - self.series.weight
    }

    pub fn n_min(&self) -> i64 {
        self.series.n_min
    }

    pub fn cocycle(&self) -> &PolynomialC {
        &self.cocycle
    }

    /// Coefficients `a(n)`, `n_min ≤ n ≤ 0`.
    pub fn principal(&self) -> impl Iterator<Item = (i64, &Complex)> {
        let n0 = self.series.n_min;
        self.series.coeffs.iter().take((1 - n0).max(0) as usize).enumerate().map(move |(i, a)| (n0 + i as i64, a))
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero() && self.cocycle.is_zero()
    }

    /// `g(w)`.
    pub fn evaluate(&self, w: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        self.series.evaluate(w, ctx)
    }

    /// `g(w) − Σ_{n ≤ 0} a(n) e^{2πinw}`, which is `O(e^{−2π Im w})`.
    ///
    /// Summed directly high in the half-plane, where subtracting the growing
    /// principal part would cancel away the working precision.
    pub fn decaying(&self, w: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
        if !self.series.modular || w.im >= S_FALLBACK_HEIGHT {
            return self.tail.sum_at(w, ctx);
        }
        let p = ctx.prec();
        let two_pi_i = Complex::new(Float::new(p), pi(p) * 2u32);
        let q = (&two_pi_i * w).exp();
        let principal: Complex = self.principal().map(|(n, a)| a * &q.powi(n)).sum();
        Ok(&self.series.evaluate(w, ctx)? - &principal)
    }
}

/// The factor multiplying `g(w)` under the integral.
#[derive(Clone, Debug, PartialEq)]
pub enum RegKernel {
    /// `scale·(w + shift)^{−k}` with `Im shift > 0`.
    Rational { shift: Complex, weight: i32, scale: Complex },
    /// A polynomial in `w`.
    Polynomial(PolynomialC),
}

impl RegKernel {
    /// `(w + z)^{−k}`.
    pub fn cauchy(z: &Complex, k: i32) -> Self {
        RegKernel::Rational { shift: z.clone(), weight: k, scale: Complex::one(z.prec()) }
    }

    pub fn eval(&self, w: &Complex) -> Complex {
        match self {
            RegKernel::Rational { shift, weight, scale } => scale * &(w + shift).powi(-(*weight as i64)),
            RegKernel::Polynomial(p) => p.eval(w),
        }
    }

    /// `K|_k S` for a rational kernel: `c(−1/w + s)^{−k} w^{−k} = c s^{−k} (w − 1/s)^{−k}`.
    fn slash_s(&self) -> Result<Self> {
        match self {
            RegKernel::Rational { shift, weight, scale } => Ok(RegKernel::Rational {
                shift: -shift.recip(),
                weight: *weight,
                scale: scale * &shift.powi(-(*weight as i64)),
            }),
            RegKernel::Polynomial(_) => Err(Error::DomainError("cusp-to-cusp integrals need a weight-k rational kernel".into())),
        }
    }
}

/// Where an integral starts or ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cusp {
    Infinity,
    Zero,
}

/// `[∫_{z₀}^{i∞} e^{(u+2πin)w} K(w) dw]_{u=0}` for one principal term.
fn principal_term(n: i64, kernel: &RegKernel, z0: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.prec();
    let a = Complex::new(Float::new(p), pi(p) * (2 * n));
    match kernel {
        RegKernel::Rational { shift, weight, scale } => {
            let k = *weight;
            let v0 = z0 + shift;
            if v0.im <= 0 {
                return Err(Error::BadPath(format!("kernel pole meets the ray from {z0}")));
            }
            if n == 0 {
                // ∫_{v₀}^{i∞} v^{−k} dv
                return Ok((scale * &v0.powi(1 - k as i64)).div_real(&Float::with_val(p, k - 1)));
            }
            // e^{−a·shift} (−a)^{k−1} Γ(1−k, −a v₀), with arg(−a v₀) continued to Arg v₀ − 3π/2.
            let zeta = &(-&a) * &v0;
            let arg = Float::with_val(p, v0.arg() - pi(p) * 3u32 / 2u32);
            let g = incomplete_gamma_neg_int_on_sheet((k - 1) as u32, &zeta, &arg, ctx)?;
            Ok(&(&(scale * &(&(-&a) * shift).exp()) * &(-&a).powi(k as i64 - 1)) * &g)
        }
        RegKernel::Polynomial(poly) => {
            if n == 0 {
                if poly.is_zero() {
                    return Ok(Complex::zero(p));
                }
                return Err(Error::NotRegularizable("constant term against a polynomial has a pole at u = 0".into()));
            }
            // ∫_{z₀}^{i∞} e^{aw} w^j dw = −e^{a z₀} Σ_{m ≤ j} (−1)^m j!/(j−m)! z₀^{j−m} a^{−m−1}
            let e = (&a * z0).exp();
            let ainv = a.recip();
            let mut acc = Complex::zero(p);
            for (j, c) in poly.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut falling = Float::with_val(p, 1);
                let mut apow = ainv.clone();
                let mut part = Complex::zero(p);
                for m in 0..=j {
                    let t = (&z0.powi((j - m) as i64) * &apow).scale(&falling);
                    if m % 2 == 0 {
                        part += t;
                    } else {
                        part -= t;
                    }
                    falling *= (j - m) as u32;
                    apow = &apow * &ainv;
                }
                acc += c * &part;
            }
            Ok(-(&e * &acc))
        }
    }
}

/// `R.∫_{z₀}^{i∞} g(w) K(w) dw` along the vertical ray.
pub fn reg_integral_to_icusp(g: &ExponentialQExpansion, kernel: &RegKernel, z0: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.prec();
    if z0.im <= 0 {
        return Err(Error::DomainError(format!("base point {z0} is not in the upper half-plane")));
    }
    if let RegKernel::Rational { weight, .. } = kernel {
        if *weight != g.kernel_weight() {
            return Err(Error::WeightMismatch(format!("kernel weight {weight} against expansion weight {}", g.series.weight)));
        }
    }
    if g.series.is_zero() {
        return Ok(Complex::zero(p));
    }
    let mut acc = Complex::zero(p);
    for (n, a) in g.principal() {
        if !a.is_zero() {
            acc += a * &principal_term(n, kernel, z0, ctx)?;
        }
    }
    let rest = quad_ray(|w: &Complex| Ok(&g.decaying(w, ctx)? * &kernel.eval(w)), &RayPath::vertical(z0.clone()), TWO_PI, ctx)?;
    Ok(acc + rest)
}

/// `R.∫_{z₀}^{𝔞} g(w)K(w) dw`, where at the cusp 0 the integrand is moved to
/// `i∞` by `S`: `(gK)|₂S = (g − ρ)·K|_kS`.
fn reg_to_cusp(g: &ExponentialQExpansion, kernel: &RegKernel, cusp: Cusp, z0: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    match cusp {
        Cusp::Infinity => reg_integral_to_icusp(g, kernel, z0, ctx),
        Cusp::Zero => {
            let ks = kernel.slash_s()?;
            let start = -z0.recip();
            let main = reg_integral_to_icusp(g, &ks, &start, ctx)?;
            if g.cocycle.is_zero() {
                return Ok(main);
            }
            let rho = &g.cocycle;
            let corr = quad_ray(|w: &Complex| Ok(&rho.eval(w) * &ks.eval(w)), &RayPath::vertical(start.clone()), 0.0, ctx)?;
            Ok(main - corr)
        }
    }
}

/// `R.∫_𝔞^𝔟 g(w)K(w) dw = R.∫_{z₀}^𝔟 + R.∫_𝔞^{z₀}`.
pub fn reg_integral_cusp_to_cusp(
    g: &ExponentialQExpansion,
    kernel: &RegKernel,
    from: Cusp,
    to: Cusp,
    z0: &Complex,
    ctx: &PrecisionContext,
) -> Result<Complex> {
    if from == to {
        return Ok(Complex::zero(ctx.prec()));
    }
    Ok(reg_to_cusp(g, kernel, to, z0, ctx)? - reg_to_cusp(g, kernel, from, z0, ctx)?)
}

/// `F*`, `r*`, `r̃*` and `r̂* = r* − r̃*` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct StarredPeriods {
    pub z: Complex,
    pub f_star: Complex,
    pub r_star: Complex,
    pub tilde_star: Complex,
    pub hat_star: Complex,
}

/// `F*(z) = R.∫_{−z̄}^{i∞} g(w)(w+z)^{−k} dw`.
pub fn f_star(g: &ExponentialQExpansion, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    reg_integral_to_icusp(g, &RegKernel::cauchy(z, g.kernel_weight()), &-z.conj(), ctx)
}

/// `r*(z) = (R.∫_0^{i∞} g(w)(w+z)^{−k} dw)|_k S`, split at `z₀ = i`.
pub fn r_star(g: &ExponentialQExpansion, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let k = g.kernel_weight();
    let sz = -z.recip();
    let base = Complex::i(ctx.prec());
    let v = reg_integral_cusp_to_cusp(g, &RegKernel::cauchy(&sz, k), Cusp::Zero, Cusp::Infinity, &base, ctx)?;
    Ok(&v * &z.powi(-(k as i64)))
}

/// `r̃*(z) = ∫_{−z̄}^{i∞} ρ(w)(w+z)^{−k} dw`, no regularization needed.
pub fn tilde_star(g: &ExponentialQExpansion, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    let p = ctx.prec();
    if g.cocycle.is_zero() {
        return Ok(Complex::zero(p));
    }
    let k = g.kernel_weight() as i64;
    let rho = &g.cocycle;
    quad_ray(|w: &Complex| Ok(&rho.eval(w) * &(w + z).powi(-k)), &RayPath::vertical(-z.conj()), 0.0, ctx)
}

/// `r̂*(z)`.
pub fn hat_star(g: &ExponentialQExpansion, z: &Complex, ctx: &PrecisionContext) -> Result<Complex> {
    Ok(&r_star(g, z, ctx)? - &tilde_star(g, z, ctx)?)
}

/// All four starred functions at `z`.
pub fn starred_periods(g: &ExponentialQExpansion, z: &Complex, ctx: &PrecisionContext) -> Result<StarredPeriods> {
    if z.im <= 0 {
        return Err(Error::DomainError(format!("Im z = {} is not positive", z.im.to_f64())));
    }
    let f_star = f_star(g, z, ctx)?;
    let r_star = r_star(g, z, ctx)?;
    let tilde_star = tilde_star(g, z, ctx)?;
    let hat_star = &r_star - &tilde_star;
    Ok(StarredPeriods { z: z.clone(), f_star, r_star, tilde_star, hat_star })
}

/// `F*|_k(S − 1) = r̂*`, and `r̂*|(1+S) = r̂*|(1+U+U²) = 0` relative to the largest summand.
pub fn verify_per_star(g: &ExponentialQExpansion, pts: &[Complex], ctx: &PrecisionContext) -> Result<Vec<RelationReport>> {
    let k = g.kernel_weight();
    let lhs = |z: &Complex| {
        let sz = -z.recip();
        Ok(&(&f_star(g, &sz, ctx)? * &z.powi(-(k as i64))) - &f_star(g, z, ctx)?)
    };
    let hat = |z: &Complex| hat_star(g, z, ctx);
    let per = pointwise_report("F*|(S-1) = hat r*", lhs, hat, pts, ctx.tol_tight)?;
    let family = |identity: &str, els: &[GroupElement]| -> Result<RelationReport> {
        let residuals = pts
            .par_iter()
            .map(|z| {
                let (sum, scale) = slash_sum(&hat, k, els, z)?;
                Ok(sum.abs_f64() / scale)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RelationReport::new(identity, pts.to_vec(), residuals, ctx.tol_tight))
    };
    let one_s = family("hat r*|(1+S) = 0", &[GroupElement::IDENTITY, GroupElement::S])?;
    let one_u = family("hat r*|(1+U+U^2) = 0", &[GroupElement::IDENTITY, GroupElement::U, GroupElement::U2])?;
    Ok(vec![per, one_s, one_u])
}

/// With a vanishing cocycle `r̂*` is holomorphic: `|ξ_k r̂*| ≤ tol_fd·max(1, |r̂*|)`.
pub fn verify_star_holomorphic(g: &ExponentialQExpansion, pts: &[Complex], ctx: &PrecisionContext) -> Result<RelationReport> {
    let k = g.kernel_weight();
    let hat = |z: &Complex| hat_star(g, z, ctx);
    let residuals = pts
        .par_iter()
        .map(|z| Ok(xi_fd(hat, k, z, ctx)?.abs_f64() / hat(z)?.abs_f64().max(1.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RelationReport::new("xi_k hat r* = 0", pts.to_vec(), residuals, ctx.tol_fd))
}

/// `R.∫_0^{i∞} g(w)(w+z)^{−k} dw` computed with base points `a` and `b` agrees at every `z`.
pub fn verify_base_point_independence(
    g: &ExponentialQExpansion,
    pts: &[Complex],
    a: &Complex,
    b: &Complex,
    ctx: &PrecisionContext,
) -> Result<RelationReport> {
    let k = g.kernel_weight();
    let at = |z: &Complex, base: &Complex| {
        reg_integral_cusp_to_cusp(g, &RegKernel::cauchy(z, k), Cusp::Zero, Cusp::Infinity, base, ctx)
    };
    pointwise_report(
        "R.int_0^{i oo} independent of base point",
        |z| at(z, a),
        |z| at(z, b),
        pts,
        ctx.tol_tight,
    )
}

/// `∫_{−z̄}^{i∞} (w+z)^{−k} dw = (2iy)^{1−k}/(k−1)`, whose `ξ_k`-image is the constant `(2i)^{1−k}`.
pub fn third_term(z: &Complex, k: i32) -> Complex {
    let p = z.prec();
    let two_iy = Complex::new(Float::new(p), Float::with_val(p, &z.im * 2u32));
    two_iy.powi(1 - k as i64).div_real(&Float::with_val(p, k - 1))
}
