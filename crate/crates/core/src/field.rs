//! Exact scalar arithmetic: arbitrary-precision rationals and prime fields.
//!
//! [`Rational`] is a reduced fraction with positive denominator, backed by
//! arbitrary-precision integers. [`Fp`] is an element of the prime field
//! `𝔽_p` with the modulus carried alongside the value; mixing moduli is an
//! error, not undefined behaviour. Both types are immutable values and can
//! be shared freely across threads.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors from scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("denominator {0} is not invertible modulo {1}")]
    NonInvertibleDenominator(String, u64),
    #[error("invalid rational literal: {0}")]
    BadLiteral(String),
}

/// An exact rational number, always stored reduced with positive denominator.
///
/// Zero is uniquely `0/1`, so structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Result<Self, FieldError> {
        if denom == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom.into())))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn add(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }

    pub fn neg(&self) -> Self {
        Rational(-&self.0)
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        if other.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &other.0))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Reduces into `𝔽_p`. Fails when the denominator vanishes mod `p`.
    pub fn to_fp(&self, p: u64) -> Result<Fp, FieldError> {
        let pb = BigInt::from(p);
        let rem = |x: &BigInt| -> u64 {
            let mut r = x % &pb;
            if r.is_negative() {
                r += &pb;
            }
            r.to_u64().expect("residue fits in u64")
        };
        let den = Fp::new(rem(self.denom()), p);
        if den.value == 0 {
            return Err(FieldError::NonInvertibleDenominator(
                self.denom().to_string(),
                p,
            ));
        }
        Fp::new(rem(self.numer()), p).div(den)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = FieldError;

    /// Parses `"num"` or `"num/den"`.
    fn from_str(s: &str) -> Result<Self, FieldError> {
        let bad = || FieldError::BadLiteral(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let numer: BigInt = n.parse().map_err(|_| bad())?;
        let denom: BigInt = d.parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

// Wire form: "num/den" with "/den" omitted when the denominator is 1; a bare
// JSON integer is accepted on input.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(Rational::from_int(n)),
            Repr::Str(s) => s.parse().map_err(|e| D::Error::custom(format!("{e}"))),
        }
    }
}

/// An element of `𝔽_p`, with `value` reduced into `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    pub value: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(value: u64, p: u64) -> Self {
        debug_assert!(p >= 2);
        Fp {
            value: value % p,
            p,
        }
    }

    pub fn from_i64(value: i64, p: u64) -> Self {
        let r = value.rem_euclid(p as i64) as u64;
        Fp { value: r, p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_modulus(&self, other: &Self) -> Result<(), FieldError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(FieldError::ModulusMismatch(self.p, other.p))
        }
    }

    pub fn add(&self, other: Self) -> Result<Self, FieldError> {
        self.same_modulus(&other)?;
        Ok(Fp::new(self.value + other.value, self.p))
    }

    pub fn sub(&self, other: Self) -> Result<Self, FieldError> {
        self.same_modulus(&other)?;
        Ok(Fp::new(self.value + self.p - other.value, self.p))
    }

    pub fn mul(&self, other: Self) -> Result<Self, FieldError> {
        self.same_modulus(&other)?;
        Ok(Fp::new(self.value * other.value % self.p, self.p))
    }

    pub fn neg(&self) -> Self {
        Fp::new(self.p - self.value, self.p)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.value == 0 {
            return Err(FieldError::DivisionByZero);
        }
        // Fermat: a^(p-2) ≡ a^(-1) for prime p.
        Ok(Fp {
            value: pow_mod(self.value, self.p - 2, self.p),
            p: self.p,
        })
    }

    pub fn div(&self, other: Self) -> Result<Self, FieldError> {
        self.same_modulus(&other)?;
        self.mul(other.inv()?)
    }

    /// All square roots of `self` in `𝔽_p`, ascending.
    ///
    /// Found by scanning every residue; the oracle only uses p ≤ 13. Returns
    /// `{0}` for zero, two roots for a nonzero residue, nothing for a
    /// nonresidue.
    pub fn sqrt(&self) -> Vec<Fp> {
        (0..self.p)
            .filter(|s| s * s % self.p == self.value)
            .map(|s| Fp {
                value: s,
                p: self.p,
            })
            .collect()
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// Wire form in JSON reports: {"value": v, "p": p}.
impl Serialize for Fp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Fp", 2)?;
        st.serialize_field("value", &self.value)?;
        st.serialize_field("p", &self.p)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Fp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            value: u64,
            p: u64,
        }
        let r = Repr::deserialize(d)?;
        if r.p < 2 {
            return Err(D::Error::custom("modulus must be at least 2"));
        }
        Ok(Fp::new(r.value, r.p))
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// A coefficient field for polynomial arithmetic.
///
/// The field is a small context value (the rationals, or `𝔽_p` for a fixed
/// prime); elements only combine within one context. Two polynomials may be
/// combined exactly when their contexts compare equal.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + Eq + std::hash::Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    // Context method, not a constructor in the `From` sense.
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn display(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field of rationals, `ℚ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a.add(b)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a.sub(b)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a.mul(b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        a.neg()
    }
    fn inv(&self, a: &Rational) -> Result<Rational, FieldError> {
        a.inv()
    }
    fn from_i64(&self, n: i64) -> Rational {
        Rational::from_int(n)
    }
    fn display(&self, a: &Rational) -> String {
        a.to_string()
    }
}

/// The prime field `𝔽_p` for a fixed prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField(pub u64);

impl Field for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        Fp {
            value: 0,
            p: self.0,
        }
    }
    fn one(&self) -> Fp {
        Fp::new(1, self.0)
    }
    fn is_zero(&self, a: &Fp) -> bool {
        a.value == 0
    }
    fn add(&self, a: &Fp, b: &Fp) -> Fp {
        a.add(*b).expect("elements of one PrimeField context")
    }
    fn sub(&self, a: &Fp, b: &Fp) -> Fp {
        a.sub(*b).expect("elements of one PrimeField context")
    }
    fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        a.mul(*b).expect("elements of one PrimeField context")
    }
    fn neg(&self, a: &Fp) -> Fp {
        a.neg()
    }
    fn inv(&self, a: &Fp) -> Result<Fp, FieldError> {
        a.inv()
    }
    fn from_i64(&self, n: i64) -> Fp {
        Fp::from_i64(n, self.0)
    }
    fn display(&self, a: &Fp) -> String {
        a.to_string()
    }
}
