//! Semifield arithmetic.
//!
//! A semifield has a commutative, associative addition and a multiplication
//! that forms an abelian group and distributes over addition. There is no
//! zero, so every element is invertible and no operation ever needs
//! subtraction. Two instances are provided:
//!
//! * [`PosRational`]: exact positive rationals under the usual operations.
//! * [`MaxPlus`]: exact rationals under `(max, +)`.
//!
//! Engine code is generic over [`Semifield`]. [`SemifieldValue`] is the
//! runtime-tagged form used at I/O boundaries, where the instance is only
//! known after parsing.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which concrete semifield a value belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemifieldKind {
    Rational,
    Tropical,
}

impl fmt::Display for SemifieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemifieldKind::Rational => f.write_str("rational"),
            SemifieldKind::Tropical => f.write_str("tropical"),
        }
    }
}

impl FromStr for SemifieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(SemifieldKind::Rational),
            "tropical" => Ok(SemifieldKind::Tropical),
            other => Err(Error::Parse(format!("unknown semifield `{other}`"))),
        }
    }
}

pub trait Semifield:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + FromStr<Err = Error> + Send + Sync + 'static
{
    const KIND: SemifieldKind;

    /// Multiplicative identity.
    fn one() -> Self;

    fn add(&self, other: &Self) -> Self;

    fn mul(&self, other: &Self) -> Self;

    fn inv(&self) -> Self;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// `k`-fold product, or the inverse of the `|k|`-fold product for negative `k`.
    fn pow(&self, k: i64) -> Self;

    /// Test-data distribution: rationals `p/q` with `p, q` uniform in `[1, 20]`,
    /// tropical integers uniform in `[-10, 10]`.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn to_value(&self) -> SemifieldValue;

    fn from_value(value: &SemifieldValue) -> Result<Self>;

    /// Sum of a non-empty sequence. Returns `None` for an empty one, since a
    /// semifield has no additive identity.
    fn sum<'a, I>(items: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let mut iter = items.into_iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, x| acc.add(x)))
    }

    fn product<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        items.into_iter().fold(Self::one(), |acc, x| acc.mul(x))
    }
}

/// A strictly positive rational number, always stored in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PosRational(BigRational);

impl PosRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let (numer, denom) = (numer.into(), denom.into());
        if !numer.is_positive() || !denom.is_positive() {
            return Err(Error::NotPositive(format!("{numer}/{denom}")));
        }
        Ok(PosRational(BigRational::new(numer, denom)))
    }

    pub fn from_integer(n: u64) -> Result<Self> {
        Self::new(n, 1u32)
    }

    pub fn from_ratio(ratio: BigRational) -> Result<Self> {
        if !ratio.is_positive() {
            return Err(Error::NotPositive(ratio.to_string()));
        }
        Ok(PosRational(ratio))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for PosRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_ratio(&self.0, f)
    }
}

impl FromStr for PosRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ratio = parse_ratio(s.trim())?;
        PosRational::from_ratio(ratio)
    }
}

impl Semifield for PosRational {
    const KIND: SemifieldKind = SemifieldKind::Rational;

    fn one() -> Self {
        PosRational(BigRational::one())
    }

    fn add(&self, other: &Self) -> Self {
        PosRational(&self.0 + &other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        PosRational(&self.0 * &other.0)
    }

    fn inv(&self) -> Self {
        PosRational(self.0.recip())
    }

    fn div(&self, other: &Self) -> Self {
        PosRational(&self.0 / &other.0)
    }

    fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.0.recip() } else { self.0.clone() };
        let e = k.unsigned_abs();
        let numer = num_traits::pow::Pow::pow(base.numer(), e);
        let denom = num_traits::pow::Pow::pow(base.denom(), e);
        // numer/denom of a reduced fraction stay coprime under powers
        PosRational(BigRational::new_raw(numer, denom))
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let p: u32 = rng.gen_range(1..=20);
        let q: u32 = rng.gen_range(1..=20);
        PosRational(BigRational::new(p.into(), q.into()))
    }

    fn to_value(&self) -> SemifieldValue {
        SemifieldValue::Rational(self.clone())
    }

    fn from_value(value: &SemifieldValue) -> Result<Self> {
        match value {
            SemifieldValue::Rational(r) => Ok(r.clone()),
            SemifieldValue::Tropical(_) => Err(Error::InstanceMismatch),
        }
    }
}

/// A tropical number: addition is `max`, multiplication is `+`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MaxPlus(BigRational);

impl MaxPlus {
    pub fn new(value: BigRational) -> Self {
        MaxPlus(value)
    }

    pub fn from_integer(n: i64) -> Self {
        MaxPlus(BigRational::from_integer(n.into()))
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for MaxPlus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("t:")?;
        fmt_ratio(&self.0, f)
    }
}

impl FromStr for MaxPlus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix("t:")
            .ok_or_else(|| Error::Parse(format!("tropical value `{s}` lacks the `t:` prefix")))?;
        Ok(MaxPlus(parse_ratio(body)?))
    }
}

impl Semifield for MaxPlus {
    const KIND: SemifieldKind = SemifieldKind::Tropical;

    fn one() -> Self {
        MaxPlus(BigRational::zero())
    }

    fn add(&self, other: &Self) -> Self {
        if self.0 >= other.0 {
            self.clone()
        } else {
            other.clone()
        }
    }

    fn mul(&self, other: &Self) -> Self {
        MaxPlus(&self.0 + &other.0)
    }

    fn inv(&self) -> Self {
        MaxPlus(-&self.0)
    }

    fn div(&self, other: &Self) -> Self {
        MaxPlus(&self.0 - &other.0)
    }

    fn pow(&self, k: i64) -> Self {
        MaxPlus(&self.0 * BigRational::from_integer(k.into()))
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        MaxPlus::from_integer(rng.gen_range(-10..=10))
    }

    fn to_value(&self) -> SemifieldValue {
        SemifieldValue::Tropical(self.clone())
    }

    fn from_value(value: &SemifieldValue) -> Result<Self> {
        match value {
            SemifieldValue::Tropical(t) => Ok(t.clone()),
            SemifieldValue::Rational(_) => Err(Error::InstanceMismatch),
        }
    }
}

/// A semifield element whose instance is only known at runtime.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum SemifieldValue {
    Rational(PosRational),
    Tropical(MaxPlus),
}

impl SemifieldValue {
    pub fn kind(&self) -> SemifieldKind {
        match self {
            SemifieldValue::Rational(_) => SemifieldKind::Rational,
            SemifieldValue::Tropical(_) => SemifieldKind::Tropical,
        }
    }

    pub fn one(kind: SemifieldKind) -> Self {
        match kind {
            SemifieldKind::Rational => SemifieldValue::Rational(PosRational::one()),
            SemifieldKind::Tropical => SemifieldValue::Tropical(MaxPlus::one()),
        }
    }

    /// Parses `s` as an element of the `kind` instance.
    pub fn parse(kind: SemifieldKind, s: &str) -> Result<Self> {
        match kind {
            SemifieldKind::Rational => Ok(SemifieldValue::Rational(s.parse()?)),
            SemifieldKind::Tropical => Ok(SemifieldValue::Tropical(s.parse()?)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.binary(other, |a, b| a.add(b), |a, b| a.add(b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.binary(other, |a, b| a.mul(b), |a, b| a.mul(b))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.binary(other, |a, b| a.div(b), |a, b| a.div(b))
    }

    pub fn pow(&self, k: i64) -> Self {
        match self {
            SemifieldValue::Rational(a) => SemifieldValue::Rational(a.pow(k)),
            SemifieldValue::Tropical(a) => SemifieldValue::Tropical(a.pow(k)),
        }
    }

    fn binary(
        &self,
        other: &Self,
        rat: impl FnOnce(&PosRational, &PosRational) -> PosRational,
        trop: impl FnOnce(&MaxPlus, &MaxPlus) -> MaxPlus,
    ) -> Result<Self> {
        match (self, other) {
            (SemifieldValue::Rational(a), SemifieldValue::Rational(b)) => Ok(SemifieldValue::Rational(rat(a, b))),
            (SemifieldValue::Tropical(a), SemifieldValue::Tropical(b)) => Ok(SemifieldValue::Tropical(trop(a, b))),
            _ => Err(Error::InstanceMismatch),
        }
    }
}

impl fmt::Display for SemifieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemifieldValue::Rational(a) => a.fmt(f),
            SemifieldValue::Tropical(a) => a.fmt(f),
        }
    }
}

impl FromStr for SemifieldValue {
    type Err = Error;

    /// The `t:` prefix selects the tropical instance.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().starts_with("t:") {
            Ok(SemifieldValue::Tropical(s.parse()?))
        } else {
            Ok(SemifieldValue::Rational(s.parse()?))
        }
    }
}

/// An exact half-integer, stored as twice its value.
///
/// Matching exponents are sums of `±1/2` edge contributions and half-integer
/// corrections; they must come out integral before exponentiation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);
    pub const NEG_HALF: HalfInt = HalfInt(-1);
    pub const NEG_ONE: HalfInt = HalfInt(-2);

    pub const fn from_halves(halves: i64) -> Self {
        HalfInt(halves)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn halves(self) -> i64 {
        self.0
    }

    /// The integer value, or `None` when the denominator is 2.
    pub fn to_integer(self) -> Option<i64> {
        self.0.is_even().then_some(self.0 / 2)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;

    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;

    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

fn fmt_ratio(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Accepts `p`, `p/q` and finite decimals such as `-1.25`.
fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("`{s}` is not a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
        let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow::Pow::pow(BigInt::from(10u32), frac.len());
        return Ok(BigRational::new(numer, denom));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}
