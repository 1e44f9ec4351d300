//! Exact coefficient arithmetic: Q via big rationals, F_p (odd prime) via
//! canonical representatives in [0, p-1].

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    /// F_p for an odd prime p.
    Prime(u64),
}

impl FieldSpec {
    pub fn validate(self) -> Result<Self> {
        match self {
            FieldSpec::Rational => Ok(self),
            FieldSpec::Prime(2) => Err(Error::CharacteristicTwo),
            FieldSpec::Prime(p) if is_prime(p) => Ok(self),
            FieldSpec::Prime(p) => Err(Error::NotPrime(p)),
        }
    }

    pub fn zero(self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldElement {
        match self {
            FieldSpec::Rational => FieldElement::Rational(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                FieldElement::Prime { p, val: r }
            }
        }
    }

    pub fn from_fraction(self, num: i64, den: i64) -> Result<FieldElement> {
        if den == 0 {
            return Err(Error::Internal("division by zero in literal".into()));
        }
        let d = self.from_i64(den);
        if d.is_zero() {
            return Err(Error::Internal(format!("denominator {den} vanishes in this field")));
        }
        self.from_i64(num).div(&d)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { p: u64, val: u64 },
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        match self {
            FieldElement::Rational(_) => FieldSpec::Rational,
            FieldElement::Prime { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Prime { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Prime { val, .. } => *val == 1,
        }
    }

    fn check_same(&self, other: &FieldElement) -> Result<()> {
        if self.spec() == other.spec() {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a + b)
            }
            (FieldElement::Prime { p, val: a }, FieldElement::Prime { val: b, .. }) => {
                FieldElement::Prime { p: *p, val: (a + b) % p }
            }
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Prime { p, val } => {
                FieldElement::Prime { p: *p, val: if *val == 0 { 0 } else { p - val } }
            }
        }
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a * b)
            }
            (FieldElement::Prime { p, val: a }, FieldElement::Prime { val: b, .. }) => {
                FieldElement::Prime { p: *p, val: ((*a as u128 * *b as u128) % *p as u128) as u64 }
            }
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::Internal("inverse of zero".into()));
        }
        Ok(match self {
            FieldElement::Rational(a) => FieldElement::Rational(a.recip()),
            FieldElement::Prime { p, val } => {
                FieldElement::Prime { p: *p, val: mod_pow(*val, p - 2, *p) }
            }
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.mul(&other.inv()?)
    }

    /// Value as an i64 when it is an integer representable in range; used by
    /// grid enumeration and printing helpers.
    pub fn as_i64(&self) -> Option<i64> {
        match self {
            FieldElement::Rational(r) => {
                if r.is_integer() {
                    r.to_integer().try_into().ok()
                } else {
                    None
                }
            }
            FieldElement::Prime { val, .. } => Some(*val as i64),
        }
    }
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Prime { val, .. } => write!(f, "{val}"),
        }
    }
}

impl FieldElement {
    /// True when the canonical display form needs a leading minus sign.
    pub fn is_negative_display(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_negative(),
            FieldElement::Prime { .. } => false,
        }
    }

    /// The element with the display sign stripped (absolute value over Q,
    /// identity over F_p where representatives are already canonical).
    pub fn display_abs(&self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.abs()),
            other => other.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_basics() {
        let q = FieldSpec::Rational;
        let half = q.from_fraction(1, 2).unwrap();
        let third = q.from_fraction(1, 3).unwrap();
        let sum = half.add(&third).unwrap();
        assert_eq!(sum, q.from_fraction(5, 6).unwrap());
        assert_eq!(sum.to_string(), "5/6");
        assert!(sum.mul(&sum.inv().unwrap()).unwrap().is_one());
    }

    #[test]
    fn prime_field_canonical_reps() {
        let f7 = FieldSpec::Prime(7).validate().unwrap();
        let a = f7.from_i64(-3);
        assert_eq!(a.to_string(), "4");
        let b = f7.from_i64(5);
        assert_eq!(a.mul(&b).unwrap(), f7.from_i64(6));
        // 3^{-1} = 5 mod 7
        assert_eq!(f7.from_i64(3).inv().unwrap(), f7.from_i64(5));
    }

    #[test]
    fn char_two_rejected() {
        assert_eq!(FieldSpec::Prime(2).validate(), Err(Error::CharacteristicTwo));
        assert_eq!(FieldSpec::Prime(9).validate(), Err(Error::NotPrime(9)));
        assert!(FieldSpec::Prime(5).validate().is_ok());
    }

    #[test]
    fn mismatched_fields_error() {
        let a = FieldSpec::Rational.one();
        let b = FieldSpec::Prime(5).one();
        assert_eq!(a.add(&b), Err(Error::RingMismatch));
    }
}
