//! Coefficient rings with exact arithmetic: the integers, the rationals,
//! and prime fields.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    Integers,
    Rationals,
    PrimeField,
}

/// A coefficient ring: `Z`, `Q` or `F_p`.
///
/// Elements are carried as exact rationals everywhere; the ring decides
/// which rationals are legal and how arithmetic is normalized (prime
/// fields reduce modulo `p`, the integers reject denominators).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    kind: RingKind,
    p: u64,
}

impl Ring {
    pub fn integers() -> Self {
        Ring { kind: RingKind::Integers, p: 0 }
    }

    pub fn rationals() -> Self {
        Ring { kind: RingKind::Rationals, p: 0 }
    }

    pub fn prime_field(p: u64) -> Result<Self, Error> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Ring { kind: RingKind::PrimeField, p })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    /// 0 for `Z` and `Q`, `p` for a prime field.
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, RingKind::Rationals | RingKind::PrimeField)
    }

    pub fn tag(&self) -> String {
        match self.kind {
            RingKind::Integers => "Z".to_string(),
            RingKind::Rationals => "Q".to_string(),
            RingKind::PrimeField => format!("F{}", self.p),
        }
    }

    /// Checks that `x` is a legal element and puts it in canonical form.
    pub fn normalize(&self, x: BigRational) -> Result<BigRational, Error> {
        match self.kind {
            RingKind::Integers => {
                if !x.denom().is_one() {
                    Err(Error::NotAnInteger(x.to_string()))
                } else {
                    Ok(x)
                }
            }
            RingKind::Rationals => Ok(x),
            RingKind::PrimeField => {
                let p = BigInt::from(self.p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::DivisionByZeroModP(self.p));
                }
                let num = x.numer().mod_floor(&p);
                let inv = mod_inverse(&den, &p);
                Ok(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    pub fn reduce(&self, x: BigRational) -> BigRational {
        // Arithmetic on already-normalized elements cannot leave the ring.
        self.normalize(x).expect("arithmetic left the ring")
    }

    pub fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &BigRational) -> BigRational {
        self.reduce(-a)
    }

    /// Multiplicative inverse; only available over fields or for units of `Z`.
    pub fn inv(&self, a: &BigRational) -> Result<BigRational, Error> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self.kind {
            RingKind::Integers => {
                let one = BigRational::one();
                if a.abs() == one {
                    Ok(a.clone())
                } else {
                    Err(Error::NotAUnit(a.to_string()))
                }
            }
            _ => self.normalize(a.recip()),
        }
    }

    /// Exact division `a / b`; over `Z` requires divisibility.
    pub fn div_exact(&self, a: &BigRational, b: &BigRational) -> Result<BigRational, Error> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self.kind {
            RingKind::Integers => {
                let (q, r) = (a.numer() / b.numer(), a.numer() % b.numer());
                if r.is_zero() {
                    Ok(BigRational::from_integer(q))
                } else {
                    Err(Error::NotDivisible(a.to_string(), b.to_string()))
                }
            }
            _ => Ok(self.reduce(a / b)),
        }
    }

    pub fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    pub fn one(&self) -> BigRational {
        BigRational::one()
    }

    pub fn from_i64(&self, n: i64) -> BigRational {
        self.reduce(BigRational::from_integer(BigInt::from(n)))
    }

    /// Parses a decimal string, e.g. "-12" or "3/4".
    pub fn parse(&self, s: &str) -> Result<BigRational, Error> {
        let r: BigRational =
            s.parse().map_err(|_| Error::BadScalar(s.to_string()))?;
        self.normalize(r)
    }
}

trait ModFloor {
    fn mod_floor(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    // Extended Euclid; p prime and a nonzero mod p.
    let (mut r0, mut r1) = (p.clone(), a.mod_floor(p));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    t0.mod_floor(p)
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(Ring::prime_field(4).is_err());
        assert!(Ring::prime_field(1).is_err());
        assert!(Ring::prime_field(7).is_ok());
    }

    #[test]
    fn integers_reject_fractions() {
        let z = Ring::integers();
        assert!(z.parse("3/4").is_err());
        assert!(z.parse("-12").is_ok());
    }

    #[test]
    fn fp_normalizes_fractions() {
        let f5 = Ring::prime_field(5).unwrap();
        // 1/2 = 3 mod 5
        assert_eq!(f5.parse("1/2").unwrap(), f5.from_i64(3));
        assert_eq!(f5.from_i64(-1), f5.from_i64(4));
    }

    #[test]
    fn exact_division_over_z() {
        let z = Ring::integers();
        assert_eq!(z.div_exact(&z.from_i64(6), &z.from_i64(2)).unwrap(), z.from_i64(3));
        assert!(z.div_exact(&z.from_i64(5), &z.from_i64(2)).is_err());
    }
}
