//! Base fields: the rationals and prime fields `F_p` with `p < 2^31`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::PolyError;

/// Coefficient field of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl Field {
    /// Builds a prime field, rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Field, PolyError> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(PolyError::BadCharacteristic(p));
        }
        Ok(Field::Prime(p as u32))
    }

    /// Field of the given characteristic (0 or a prime).
    pub fn from_characteristic(c: u64) -> Result<Field, PolyError> {
        if c == 0 {
            Ok(Field::Rationals)
        } else {
            Field::prime(c)
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p as u64,
        }
    }

    /// Maps a rational number into this field.
    ///
    /// For `F_p` the result is the integer representative in `[0, p)`.
    pub fn reduce(&self, c: &BigRational) -> Result<BigRational, PolyError> {
        match self {
            Field::Rationals => Ok(c.clone()),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let den = c.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(PolyError::NotReducible(c.to_string(), self.characteristic()));
                }
                let num = c.numer().mod_floor(&p);
                let inv = mod_inverse(&den, &p);
                Ok(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    /// Reduction of an element that is known to be valid (integer or already in the field).
    pub(crate) fn norm(&self, c: BigRational) -> BigRational {
        match self {
            Field::Rationals => c,
            Field::Prime(_) => self.reduce(&c).expect("coefficient invertible in field"),
        }
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.norm(a + b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.norm(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.norm(-a)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            return None;
        }
        match self {
            Field::Rationals => Some(a.recip()),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let v = self.norm(a.clone()).to_integer();
                Some(BigRational::from_integer(mod_inverse(&v, &p)))
            }
        }
    }

    /// Residue in `[0, p)` of an element of `F_p`.
    pub fn residue(&self, a: &BigRational) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(_) => self.reduce(a).ok()?.to_integer().to_u64(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    debug_assert!(e.gcd.abs().is_one());
    e.x.mod_floor(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn prime_field_reduction() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.reduce(&q(-1, 1)).unwrap(), q(6, 1));
        assert_eq!(f.reduce(&q(1, 2)).unwrap(), q(4, 1));
        assert!(f.reduce(&q(1, 7)).is_err());
        assert_eq!(f.inv(&q(3, 1)).unwrap(), q(5, 1));
    }

    #[test]
    fn rejects_composites() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2_147_483_659).is_err());
        assert_eq!(Field::from_characteristic(0).unwrap(), Field::Rationals);
    }
}
