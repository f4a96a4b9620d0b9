//! Text format: a header line `weight k n_min N`, then one coefficient per
//! line for `n = n_min..=N`. A coefficient is an exact rational (`p/q`, an
//! integer, or a decimal), optionally followed by an imaginary part.

use std::fmt::Write as _;
use std::path::Path;

use super::{fit_empirical, parse_rational, FormKind, GaussRational, QSeries};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

impl QSeries {
    /// Parses the text format. Loaded series are not assumed modular and get
    /// a fitted tail bound.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [tag, k, lo, hi] = fields[..] else {
            return Err(parse_err(1, "expected `weight k n_min N`"));
        };
        if tag != "weight" {
            return Err(parse_err(1, "header must start with `weight`"));
        }
        let int = |s: &str| s.parse::<i64>().map_err(|_| parse_err(1, format!("bad integer `{s}`")));
        let (k, lo, hi) = (int(k)?, int(lo)?, int(hi)?);
        if hi < lo {
            return Err(parse_err(1, "N must be at least n_min"));
        }
        let weight = i32::try_from(k).map_err(|_| parse_err(1, "weight out of range"))?;
        let coeffs = lines
            .map(|(i, l)| parse_coeff(l).ok_or_else(|| parse_err(i + 1, format!("bad coefficient `{}`", l.trim()))))
            .collect::<Result<Vec<_>>>()?;
        let expected = (hi - lo + 1) as usize;
        if coeffs.len() != expected {
            return Err(Error::Parse(format!("expected {expected} coefficients, found {}", coeffs.len())));
        }
        let tail = fit_empirical(&coeffs, lo);
        Ok(QSeries::from_coeffs(weight, lo, coeffs, tail).with_kind(FormKind::Generic))
    }

    /// Renders the text format; `parse(to_text(f))` has the same coefficients.
    pub fn to_text(&self) -> String {
        let mut s = format!("weight {} {} {}\n", self.weight, self.n_min, self.n_max());
        for c in &self.coeffs {
            let _ = writeln!(s, "{c}");
        }
        s
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn parse_coeff(line: &str) -> Option<GaussRational> {
    let mut it = line.split_whitespace();
    let re = parse_rational(it.next()?)?;
    let im = match it.next() {
        Some(t) => parse_rational(t)?,
        None => Default::default(),
    };
    if it.next().is_some() {
        return None;
    }
    Some(GaussRational::new(re, im))
}
