//! Exact Gaussian rationals `p + q·i`, `p, q ∈ ℚ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::kernel::Complex;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from(1)
    }

    pub fn i() -> Self {
        Self::new(Rational::new(), Rational::from(1))
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_real(&self) -> bool {
        self.im == 0
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Rational::from(-&self.im))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(Rational::from(&self.re * r), Rational::from(&self.im * r))
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        Complex::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    /// `|z|` as an `f64`, for tail-bound fitting.
    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        Self::new(Rational::from(n), Rational::new())
    }
}

impl From<Rational> for GaussRational {
    fn from(r: Rational) -> Self {
        Self::new(r, Rational::new())
    }
}

impl From<Integer> for GaussRational {
    fn from(n: Integer) -> Self {
        Self::new(Rational::from(n), Rational::new())
    }
}

impl Add<&GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(Rational::from(&self.re + &o.re), Rational::from(&self.im + &o.im))
    }
}

impl Sub<&GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational::new(Rational::from(&self.re - &o.re), Rational::from(&self.im - &o.im))
    }
}

impl Mul<&GaussRational> for &GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        GaussRational::new(re, im)
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(Rational::from(-&self.re), Rational::from(-&self.im))
    }
}

impl fmt::Display for GaussRational {
    /// `re` alone when real, otherwise `re im`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} {}", self.re, self.im)
        }
    }
}

/// Parses an exact rational from `p/q`, an integer, or a decimal such as `-1.25e-3`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if s.contains('/') {
        return Rational::parse(s).ok().map(Rational::from);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = Integer::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).ok()?;
    if neg {
        num = -num;
    }
    let shift = exp - frac_part.len() as i32;
    let ten = Integer::from(10);
    let r = if shift >= 0 {
        Rational::from(num * ten.pow(shift as u32))
    } else {
        Rational::from((num, ten.pow((-shift) as u32)))
    };
    Some(r)
}
