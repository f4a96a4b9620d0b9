//! Slash action, period polynomials, Eichler integrals and the
//! Eichler-Shimura relations.

mod es;
mod group;
mod period;
mod poly;

use crate::error::Result;
use crate::kernel::{Complex, PrecisionContext};
use crate::report::{scaled_residual, RelationReport};

pub use es::{es_basis, es_decompose, EsBasis, EsCoefficients};
pub use group::GroupElement;
pub use period::{period_integral, period_polynomial, EichlerIntegral, PeriodPolynomial};
pub use poly::PolynomialC;

/// Lazy `(f|_m γ)(z) = f(γz)(cz + d)^{−m}`.
pub fn slash_fn<F>(f: F, m: i32, g: GroupElement) -> impl Fn(&Complex) -> Result<Complex>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    move |z: &Complex| Ok(&f(&g.act(z))? * &g.j(z).powi(-(m as i64)))
}

/// `Σ_γ f|_m γ (z)` over a formal sum of group elements.
pub fn slash_sum<F>(f: &F, m: i32, elements: &[GroupElement], z: &Complex) -> Result<(Complex, f64)>
where
    F: Fn(&Complex) -> Result<Complex>,
{
    let p = z.prec();
    let mut acc = Complex::zero(p);
    let mut scale = 1f64;
    for g in elements {
        let t = &f(&g.act(z))? * &g.j(z).powi(-(m as i64));
        scale = scale.max(t.abs_f64());
        acc += t;
    }
    Ok((acc, scale))
}

const ONE_PLUS_S: [GroupElement; 2] = [GroupElement::IDENTITY, GroupElement::S];
const ONE_PLUS_U_U2: [GroupElement; 3] = [GroupElement::IDENTITY, GroupElement::U, GroupElement::U2];

/// What to test for membership in `W`.
pub enum WSubject<'a> {
    /// Checked exactly on coefficients at weight `−deg`.
    Polynomial(&'a PolynomialC),
    /// Checked pointwise at the given weight.
    Function { f: &'a (dyn Fn(&Complex) -> Result<Complex> + Sync), weight: i32 },
}

/// Residuals of `|(1+S)` and `|(1+U+U²)`.
///
/// Polynomials give two coefficient-norm residuals relative to
/// `max(1, ‖P‖)`; functions give two residuals per point, each relative to
/// the largest summand.
pub fn w_membership(subject: WSubject<'_>, tol: f64, pts: &[Complex], ctx: &PrecisionContext) -> Result<RelationReport> {
    match subject {
        WSubject::Polynomial(p) => {
            let m = -(p.degree_bound() as i32);
            let scale = p.max_norm().max(1.0);
            let sum = |els: &[GroupElement]| -> Result<f64> {
                let mut acc = PolynomialC::zero(p.degree_bound(), ctx.prec());
                for g in els {
                    acc = acc.add(&p.slash(m, *g)?);
                }
                Ok(acc.max_norm() / scale)
            };
            let residuals = vec![sum(&ONE_PLUS_S)?, sum(&ONE_PLUS_U_U2)?];
            Ok(RelationReport::new("P|(1+S) = P|(1+U+U^2) = 0", Vec::new(), residuals, tol))
        }
        WSubject::Function { f, weight } => {
            use rayon::prelude::*;
            let per_point: Vec<[f64; 2]> = pts
                .par_iter()
                .map(|z| -> Result<[f64; 2]> {
                    let (a, sa) = slash_sum(&f, weight, &ONE_PLUS_S, z)?;
                    let (b, sb) = slash_sum(&f, weight, &ONE_PLUS_U_U2, z)?;
                    Ok([a.abs_f64() / sa, b.abs_f64() / sb])
                })
                .collect::<Result<_>>()?;
            let points = pts.iter().flat_map(|z| [z.clone(), z.clone()]).collect();
            let residuals = per_point.into_iter().flatten().collect();
            Ok(RelationReport::new("f|(1+S) = f|(1+U+U^2) = 0", points, residuals, tol))
        }
    }
}

/// Residual of a pointwise identity `lhs(z) = rhs(z)` at each point, relative to `max(1, |lhs|, |rhs|)`.
pub fn pointwise_report<L, R>(identity: &str, lhs: L, rhs: R, pts: &[Complex], tol: f64) -> Result<RelationReport>
where
    L: Fn(&Complex) -> Result<Complex> + Sync,
    R: Fn(&Complex) -> Result<Complex> + Sync,
{
    use rayon::prelude::*;
    let residuals = pts
        .par_iter()
        .map(|z| Ok(scaled_residual(&lhs(z)?, &rhs(z)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RelationReport::new(identity, pts.to_vec(), residuals, tol))
}
