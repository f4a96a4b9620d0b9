//! Complex polynomials of bounded degree and their slash action.

use rug::{Float, Integer};
use serde_json::Value;

use super::GroupElement;
use crate::error::{Error, Result};
use crate::kernel::{decimal, parse_float, Complex};

/// `Σ_{j ≤ n} c_j X^j`, an element of `V_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialC {
    coeffs: Vec<Complex>,
}

impl PolynomialC {
    /// From coefficients `c_0..c_n`, lowest degree first; `n` is the degree bound.
    pub fn new(coeffs: Vec<Complex>) -> Self {
        assert!(!coeffs.is_empty(), "degree bound needs at least one coefficient");
        Self { coeffs }
    }

    pub fn zero(n: usize, prec: u32) -> Self {
        Self::new(vec![Complex::zero(prec); n + 1])
    }

    /// `X^j` in `V_n`.
    pub fn monomial(n: usize, j: usize, prec: u32) -> Self {
        let mut p = Self::zero(n, prec);
        p.coeffs[j] = Complex::one(prec);
        p
    }

    /// `X^n − 1`, the coboundary generator.
    pub fn coboundary(n: usize, prec: u32) -> Self {
        let mut p = Self::monomial(n, n, prec);
        p.coeffs[0] = Complex::from_int(prec, -1);
        p
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &Complex {
        &self.coeffs[j]
    }

    pub fn prec(&self) -> u32 {
        self.coeffs[0].prec()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &Complex) -> Complex {
        let p = self.prec().max(z.prec());
        self.coeffs.iter().rev().fold(Complex::zero(p), |acc, c| &(&acc * z) + c)
    }

    /// `P(−X)`.
    pub fn reflect(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(j, c)| if j % 2 == 1 { -c } else { c.clone() }).collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, s: &Complex) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &Self, f: impl Fn(&Complex, &Complex) -> Complex) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let p = self.prec().max(o.prec());
        let zero = Complex::zero(p);
        let coeffs = (0..n)
            .map(|j| f(self.coeffs.get(j).unwrap_or(&zero), o.coeffs.get(j).unwrap_or(&zero)))
            .collect();
        Self::new(coeffs)
    }

    /// Largest coefficient modulus.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(Complex::abs_f64).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Complex::is_zero)
    }

    /// `(P|_m γ)(X) = P(γX)(cX + d)^{−m}`.
    ///
    /// Closed in `V_n` at `m = −n`; at other weights only upper-triangular
    /// `γ` keep polynomials polynomial, anything else is
    /// [`Error::NonPolynomialResult`].
    pub fn slash(&self, m: i32, g: GroupElement) -> Result<Self> {
        let n = self.degree_bound();
        let [a, b, c, d] = g.entries();
        let p = self.prec();
        if m == -(n as i32) {
            // Σ c_j (aX + b)^j (cX + d)^{n−j}, expanded over the integers.
            let lin = |u: i64, v: i64| vec![Integer::from(v), Integer::from(u)];
            let pow_ab = powers(&lin(a, b), n);
            let pow_cd = powers(&lin(c, d), n);
            let mut out = vec![Complex::zero(p); n + 1];
            for (j, cj) in self.coeffs.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let basis = int_mul(&pow_ab[j], &pow_cd[n - j]);
                for (i, e) in basis.iter().enumerate().take(n + 1) {
                    if *e != 0 {
                        out[i] += cj.scale(&Float::with_val(p, e));
                    }
                }
            }
            return Ok(Self::new(out));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        if c == 0 {
            // P((aX + b)/d)·d^{−m} with d = a = ±1.
            let sign = if d == 1 || m % 2 == 0 { 1 } else { -1 };
            let shifted = self.compose_affine(a * d, b * d);
            return Ok(shifted.scale(&Complex::from_int(p, sign)));
        }
        Err(Error::NonPolynomialResult { m, n })
    }

    /// `P(uX + v)` for integers `u, v`.
    fn compose_affine(&self, u: i64, v: i64) -> Self {
        let n = self.degree_bound();
        let p = self.prec();
        let pw = powers(&[Integer::from(v), Integer::from(u)], n);
        let mut out = vec![Complex::zero(p); n + 1];
        for (j, cj) in self.coeffs.iter().enumerate() {
            for (i, e) in pw[j].iter().enumerate() {
                if *e != 0 {
                    out[i] += cj.scale(&Float::with_val(p, e));
                }
            }
        }
        Self::new(out)
    }

    /// JSON array of `[re, im]` decimal strings, lowest degree first.
    pub fn to_json(&self, digits: usize) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|c| Value::Array(vec![Value::String(decimal(&c.re, digits)), Value::String(decimal(&c.im, digits))]))
                .collect(),
        )
    }

    /// Reads the array written by [`to_json`](Self::to_json); numbers are accepted as well as strings.
    pub fn from_json(v: &Value, prec: u32) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("polynomial must be a JSON array".into()))?;
        if arr.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let part = |x: &Value| -> Result<Float> {
            let s = match x {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(Error::Parse(format!("bad coefficient part {x}"))),
            };
            parse_float(prec, &s).ok_or_else(|| Error::Parse(format!("bad number `{s}`")))
        };
        let coeffs = arr
            .iter()
            .map(|pair| match pair.as_array().map(Vec::as_slice) {
                Some([re, im]) => Ok(Complex::new(part(re)?, part(im)?)),
                _ => Err(Error::Parse(format!("expected [re, im], got {pair}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

/// `base^0, …, base^n` for an integer polynomial `base`.
fn powers(base: &[Integer], n: usize) -> Vec<Vec<Integer>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(vec![Integer::from(1)]);
    for j in 1..=n {
        let next = int_mul(&out[j - 1], base);
        out.push(next);
    }
    out
}

fn int_mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
