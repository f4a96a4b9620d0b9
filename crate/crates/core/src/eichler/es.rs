//! Eichler-Shimura decomposition in one-dimensional cusp spaces.

use rug::Float;

use super::{period_polynomial, PolynomialC};
use crate::error::{Error, Result};
use crate::kernel::{Complex, PrecisionContext};
use crate::qforms::cusp_form;

/// `r_{f₀}`, `r_{f₀}(−X)` and `X^{k−2} − 1` for the basis form `f₀` of `S_k`.
#[derive(Clone, Debug)]
pub struct EsBasis {
    pub weight: i32,
    pub columns: [PolynomialC; 3],
}

/// `P = α r_{f₀} + β r_{f₀}(−X) + c (X^{k−2} − 1)` and the relative fit residual.
#[derive(Clone, Debug, PartialEq)]
pub struct EsCoefficients {
    pub alpha: Complex,
    pub beta: Complex,
    pub c: Complex,
    pub residual: f64,
}

/// Builds the basis for `k` with `dim S_k = 1`.
pub fn es_basis(k: i32, ctx: &PrecisionContext) -> Result<EsBasis> {
    let f0 = cusp_form(k, 64)?;
    let r = period_polynomial(&f0, ctx)?.poly;
    let refl = r.reflect();
    let cob = PolynomialC::coboundary(r.degree_bound(), ctx.prec());
    Ok(EsBasis { weight: k, columns: [r, refl, cob] })
}

fn dot(u: &[Complex], v: &[Complex], p: u32) -> Complex {
    u.iter().zip(v).fold(Complex::zero(p), |acc, (a, b)| acc + &a.conj() * b)
}

fn norm(u: &[Complex], p: u32) -> Float {
    Float::with_val(p, dot(u, u, p).re.sqrt_ref())
}

/// Least squares `min ‖A x − b‖` by Gram-Schmidt QR with one
/// reorthogonalization pass. Returns `x` and `‖A x − b‖`.
fn least_squares(cols: &[Vec<Complex>], b: &[Complex], p: u32) -> Result<(Vec<Complex>, Float)> {
    let n = cols.len();
    let mut q: Vec<Vec<Complex>> = Vec::with_capacity(n);
    let mut r = vec![vec![Complex::zero(p); n]; n];
    let rank_tol = Float::with_val(p, Float::i_exp(1, -(p as i32) / 2));
    for j in 0..n {
        let mut v = cols[j].clone();
        let orig = norm(&v, p);
        for _pass in 0..2 {
            for (i, qi) in q.iter().enumerate() {
                let h = dot(qi, &v, p);
                for (vk, qk) in v.iter_mut().zip(qi) {
                    *vk -= &(&h * qk);
                }
                r[i][j] += h;
            }
        }
        let nv = norm(&v, p);
        if nv <= Float::with_val(p, &orig * &rank_tol) || nv.is_zero() {
            return Err(Error::RankDeficient);
        }
        for vk in v.iter_mut() {
            *vk = vk.div_real(&nv);
        }
        r[j][j] = Complex::from_real(nv);
        q.push(v);
    }
    let qtb: Vec<Complex> = q.iter().map(|qi| dot(qi, b, p)).collect();
    let mut x = vec![Complex::zero(p); n];
    for i in (0..n).rev() {
        let mut s = qtb[i].clone();
        for j in i + 1..n {
            s -= &(&r[i][j] * &x[j]);
        }
        x[i] = &s / &r[i][i];
    }
    let mut res = b.to_vec();
    for (j, col) in cols.iter().enumerate() {
        for (rk, ck) in res.iter_mut().zip(col) {
            *rk -= &(&x[j] * ck);
        }
    }
    Ok((x, norm(&res, p)))
}

/// Solves for `(α, β, c)`; fails with [`Error::NotInW`] when the relative
/// residual exceeds `tol`.
pub fn es_decompose(poly: &PolynomialC, basis: &EsBasis, tol: f64, ctx: &PrecisionContext) -> Result<EsCoefficients> {
    let n = basis.columns[0].degree_bound();
    if poly.degree_bound() != n {
        return Err(Error::WeightMismatch(format!("degree bound {} vs {n}", poly.degree_bound())));
    }
    let p = ctx.prec() + 32;
    // Normalize columns so the fit is not dominated by scale.
    let scales: Vec<Float> = basis.columns.iter().map(|c| Float::with_val(p, c.max_norm())).collect();
    let cols: Vec<Vec<Complex>> = basis
        .columns
        .iter()
        .zip(&scales)
        .map(|(c, s)| c.coeffs().iter().map(|z| z.with_prec(p).div_real(s)).collect())
        .collect();
    let b: Vec<Complex> = poly.coeffs().iter().map(|z| z.with_prec(p)).collect();
    let (x, res) = least_squares(&cols, &b, p)?;
    let bn = norm(&b, p);
    let residual = if bn.is_zero() { res.to_f64() } else { Float::with_val(p, &res / &bn).to_f64() };
    if residual > tol {
        return Err(Error::NotInW(residual));
    }
    let q = ctx.prec();
    let mut it = x.into_iter().zip(&scales).map(|(xi, s)| xi.div_real(s).with_prec(q));
    let (alpha, beta, c) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    Ok(EsCoefficients { alpha, beta, c, residual })
}
