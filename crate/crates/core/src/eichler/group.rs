//! Integer matrices of determinant one.

use std::fmt;
use std::ops::Mul;

use rug::Float;

use crate::error::{Error, Result};
use crate::kernel::Complex;

/// `[[a, b], [c, d]]` with `ad − bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl GroupElement {
    pub const IDENTITY: Self = Self { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Self = Self { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Self = Self { a: 1, b: 1, c: 0, d: 1 };
    pub const U: Self = Self { a: 1, b: -1, c: 1, d: 0 };
    /// `U² = [[0, −1], [1, −1]]`.
    pub const U2: Self = Self { a: 0, b: -1, c: 1, d: -1 };
    /// `Ũ = S U² S⁻¹ = [[−1, −1], [1, 0]]`.
    pub const U_TILDE: Self = Self { a: -1, b: -1, c: 1, d: 0 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::DomainError(format!("det [[{a}, {b}], [{c}, {d}]] != 1")));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn neg(&self) -> Self {
        Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// `T^n`.
    pub fn translation(n: i64) -> Self {
        Self { a: 1, b: n, c: 0, d: 1 }
    }

    /// `cz + d`.
    pub fn j(&self, z: &Complex) -> Complex {
        let p = z.prec();
        z.scale_int(self.c).add_real(&Float::with_val(p, self.d))
    }

    /// `γz = (az + b)/(cz + d)`.
    pub fn act(&self, z: &Complex) -> Complex {
        let p = z.prec();
        let num = z.scale_int(self.a).add_real(&Float::with_val(p, self.b));
        &num / &self.j(z)
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, o: GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}
