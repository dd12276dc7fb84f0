//! Exact scalar fields: prime fields GF(p) and the rationals.
//!
//! Every algorithm in this crate is written against the [`Field`] trait. A field
//! element does not know how to build a zero on its own (a GF(p) zero needs `p`),
//! so constructors take an explicit context, [`Field::Ctx`].

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field descriptor as written in instance files: `gf:p` or `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldTag {
    Prime(u64),
    Rational,
}

impl Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Prime(p) => write!(f, "gf:{p}"),
            FieldTag::Rational => write!(f, "q"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "q" {
            return Ok(FieldTag::Rational);
        }
        let p = s
            .strip_prefix("gf:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| {
                Error::Parse(format!("unknown field tag `{s}` (expected `gf:p` or `q`)"))
            })?;
        if !is_prime(p) {
            return Err(Error::Parse(format!("field modulus {p} is not prime")));
        }
        Ok(FieldTag::Prime(p))
    }
}

impl Serialize for FieldTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact commutative field.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Data needed to materialize constants (the modulus for GF(p)).
    type Ctx: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn tag(ctx: &Self::Ctx) -> FieldTag;
    fn ctx_from_tag(tag: FieldTag) -> Result<Self::Ctx>;
    /// Parses a decimal integer or fraction (`"3"`, `"-7/2"`).
    fn parse(ctx: &Self::Ctx, s: &str) -> Result<Self>;

    fn is_one(&self) -> bool;
}

/// An element of the prime field GF(p). The modulus travels with the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gf {
    value: u64,
    modulus: u64,
}

impl Gf {
    pub fn new(value: i64, modulus: u64) -> Self {
        let v = (value as i128).rem_euclid(modulus as i128) as u64;
        Gf { value: v, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Gf {
            value: 1 % self.modulus,
            modulus: self.modulus,
        };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Gf {
    type Output = Gf;
    fn add(self, o: Gf) -> Gf {
        debug_assert_eq!(self.modulus, o.modulus);
        let s = (self.value as u128 + o.value as u128) % self.modulus as u128;
        Gf {
            value: s as u64,
            modulus: self.modulus,
        }
    }
}

impl Sub for Gf {
    type Output = Gf;
    fn sub(self, o: Gf) -> Gf {
        debug_assert_eq!(self.modulus, o.modulus);
        self + (-o)
    }
}

impl Mul for Gf {
    type Output = Gf;
    fn mul(self, o: Gf) -> Gf {
        debug_assert_eq!(self.modulus, o.modulus);
        let s = (self.value as u128 * o.value as u128) % self.modulus as u128;
        Gf {
            value: s as u64,
            modulus: self.modulus,
        }
    }
}

impl Neg for Gf {
    type Output = Gf;
    fn neg(self) -> Gf {
        let v = if self.value == 0 {
            0
        } else {
            self.modulus - self.value
        };
        Gf {
            value: v,
            modulus: self.modulus,
        }
    }
}

impl Field for Gf {
    type Ctx = u64;

    fn zero(p: &u64) -> Self {
        Gf {
            value: 0,
            modulus: *p,
        }
    }

    fn one(p: &u64) -> Self {
        Gf {
            value: 1 % *p,
            modulus: *p,
        }
    }

    fn from_i64(p: &u64, v: i64) -> Self {
        Gf::new(v, *p)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn is_one(&self) -> bool {
        self.value == 1
    }

    fn inv(&self) -> Option<Self> {
        // Fermat: a^(p-2)
        (self.value != 0).then(|| self.pow(self.modulus - 2))
    }

    fn tag(p: &u64) -> FieldTag {
        FieldTag::Prime(*p)
    }

    fn ctx_from_tag(tag: FieldTag) -> Result<u64> {
        match tag {
            FieldTag::Prime(p) => Ok(p),
            FieldTag::Rational => Err(Error::FieldMismatch),
        }
    }

    fn parse(p: &u64, s: &str) -> Result<Self> {
        let q = parse_rational(s)?;
        let reduce = |x: &BigInt| -> Gf {
            let r = x.mod_floor(&BigInt::from(*p));
            Gf {
                value: r.to_u64().unwrap_or(0),
                modulus: *p,
            }
        };
        let num = reduce(q.numer());
        let den = reduce(q.denom());
        let inv = den
            .inv()
            .ok_or_else(|| Error::Parse(format!("denominator of `{s}` vanishes mod {p}")))?;
        Ok(num * inv)
    }
}

/// Rational field element: an exact reduced fraction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Q(BigRational);

impl Q {
    pub fn new(v: BigRational) -> Self {
        Q(v)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }
}

impl From<BigRational> for Q {
    fn from(v: BigRational) -> Self {
        Q(v)
    }
}

impl Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_rational(&self.0))
    }
}

impl Add for Q {
    type Output = Q;
    fn add(self, o: Q) -> Q {
        Q(self.0 + o.0)
    }
}

impl Sub for Q {
    type Output = Q;
    fn sub(self, o: Q) -> Q {
        Q(self.0 - o.0)
    }
}

impl Mul for Q {
    type Output = Q;
    fn mul(self, o: Q) -> Q {
        Q(self.0 * o.0)
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl Field for Q {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        Q(BigRational::zero())
    }

    fn one(_: &()) -> Self {
        Q(BigRational::one())
    }

    fn from_i64(_: &(), v: i64) -> Self {
        Q(BigRational::from_integer(BigInt::from(v)))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_one(&self) -> bool {
        self.0.is_one()
    }

    fn inv(&self) -> Option<Self> {
        (!self.0.is_zero()).then(|| Q(self.0.recip()))
    }

    fn tag(_: &()) -> FieldTag {
        FieldTag::Rational
    }

    fn ctx_from_tag(tag: FieldTag) -> Result<()> {
        match tag {
            FieldTag::Rational => Ok(()),
            FieldTag::Prime(_) => Err(Error::FieldMismatch),
        }
    }

    fn parse(_: &(), s: &str) -> Result<Self> {
        parse_rational(s).map(Q)
    }
}

/// Parses `"a"` or `"a/b"` into a reduced rational with positive denominator.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid scalar `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if Zero::is_zero(&d) {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Formats a rational the way instance files and reports expect (`"3"`, `"-7/2"`).
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
