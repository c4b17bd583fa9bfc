//! Coefficient fields: exact rationals and prime fields `F_q` with `q < 2^31`.

use std::fmt::{self, Debug};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u32 = 32003;
pub const SECOND_PRIME: u32 = 65537;

pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// `num / den`; fails when `den` vanishes in the field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem>;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    fn spec(&self) -> FieldSpec;
    fn format(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// Which field a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(q) => write!(f, "F{q}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q`, `Fq` (the default prime), `F<q>` or a bare prime.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "Q" | "QQ" | "q" => return Ok(FieldSpec::Rationals),
            "Fq" | "fq" => return Ok(FieldSpec::PrimeField(DEFAULT_PRIME)),
            _ => {}
        }
        let digits = s.strip_prefix('F').or_else(|| s.strip_prefix('f')).unwrap_or(s);
        let q: u32 = digits
            .parse()
            .map_err(|_| Error::UnsupportedField(s.to_string()))?;
        PrimeField::new(q).map(|f| f.spec())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// `Z/q` for a prime `q < 2^31`; elements are least non-negative residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    q: u32,
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if q >= 1 << 31 || !crate::arith::is_prime(q as u64) {
            return Err(Error::UnsupportedField(format!("F{q}")));
        }
        Ok(PrimeField { q })
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    fn reduce_big(&self, v: &BigInt) -> u32 {
        let r = v % BigInt::from(self.q);
        let r = if r.is_negative() { r + BigInt::from(self.q) } else { r };
        r.to_u32().expect("residue fits")
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let q = self.q as u64;
        let mut base = a as u64 % q;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        acc as u32
    }

    /// An element of exact multiplicative order `k`, if `k` divides `q - 1`.
    pub fn root_of_unity(&self, k: u64) -> Option<u32> {
        let q1 = self.q as u64 - 1;
        if k == 0 || q1 % k != 0 {
            return None;
        }
        let factors: Vec<u64> = (2..=k).filter(|d| k % d == 0 && crate::arith::is_prime(*d)).collect();
        (2..self.q).find_map(|g| {
            let z = self.pow(g, q1 / k);
            factors
                .iter()
                .all(|&p| self.pow(z, k / p) != 1)
                .then_some(z)
        })
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (if s >= self.q as u64 { s - self.q as u64 } else { s }) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.q as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.q - a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.q as u64 - 2)
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u32> {
        let d = self.reduce_big(den);
        if d == 0 {
            return Err(Error::Parse(format!("denominator {den} vanishes mod {}", self.q)));
        }
        Ok(self.mul(&self.reduce_big(num), &self.inv(&d)))
    }
    fn characteristic(&self) -> u64 {
        self.q as u64
    }
    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.q)
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(32003).unwrap();
        for a in [1u32, 2, 3, 12345, 32002] {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_i64(-1), 32002);
    }

    #[test]
    fn ratio_mod_q() {
        let f = PrimeField::new(7).unwrap();
        let half = f.from_ratio(&BigInt::from(1), &BigInt::from(2)).unwrap();
        assert_eq!(f.mul(&half, &2), 1);
        assert!(f.from_ratio(&BigInt::from(1), &BigInt::from(14)).is_err());
    }

    #[test]
    fn roots_of_unity() {
        let f = PrimeField::new(31).unwrap();
        let z = f.root_of_unity(5).unwrap();
        assert_eq!(f.pow(z, 5), 1);
        assert_ne!(z, 1);
        assert!(PrimeField::new(32003).unwrap().root_of_unity(5).is_none());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!("Fq".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField(32003));
        assert_eq!("F65537".parse::<FieldSpec>().unwrap(), FieldSpec::PrimeField(65537));
        assert!("F15".parse::<FieldSpec>().is_err());
    }
}
