//! Exact arithmetic: reduced rationals, positive reals of the form
//! `∏ p^e` with rational exponents, and their base-2 logarithms.
//!
//! Logarithms of distinct primes are linearly independent over the
//! rationals, so two [`PowerProduct`]s (or [`ExactLog`]s) are equal as real
//! numbers exactly when their normalized factor maps are equal. Every
//! identity checked by this crate is decided that way.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{self, SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Option<Self> {
        if denom.is_zero() {
            return None;
        }
        Some(Rational(BigRational::new(numer, denom)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        if n.is_finite() && d.is_finite() {
            n / d
        } else {
            // Operands beyond f64 range; num-rational rescales them.
            self.0.to_f64().unwrap_or(f64::NAN)
        }
    }

    /// Numerator and denominator as machine integers, if they fit.
    pub fn to_i64_parts(&self) -> Option<(i64, i64)> {
        Some((self.numer().to_i64()?, self.denom().to_i64()?))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<usize> for Rational {
    fn from(n: usize) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Arithmetic(format!("malformed rational `{s}`"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        Rational::from_big(n, d).ok_or_else(bad)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// Cofactors above this bound are not factored; every integer the
/// constructions produce is far smaller.
const MAX_FACTORABLE: u64 = 1 << 48;

/// Prime factorization by trial division.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Arithmetic("cannot factor 0".into()));
    }
    if n > MAX_FACTORABLE {
        return Err(Error::Arithmetic(format!("{n} is too large to factor")));
    }
    let mut out = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut k = 0;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    Ok(out)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && n <= MAX_FACTORABLE && matches!(factorize(n).as_deref(), Ok([(_, 1)]))
}

fn biguint_to_u64(n: &BigInt) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::Arithmetic(format!("{n} is too large to factor")))
}

fn add_into(map: &mut BTreeMap<u64, Rational>, prime: u64, delta: &Rational) {
    if delta.is_zero() {
        return;
    }
    let entry = map.entry(prime).or_insert_with(Rational::zero);
    *entry = &*entry + delta;
    if entry.is_zero() {
        map.remove(&prime);
    }
}

fn serialize_factor_map<S: Serializer>(
    map: &BTreeMap<u64, Rational>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = serializer.serialize_seq(Some(map.len()))?;
    for (p, e) in map {
        let (n, d) = e
            .to_i64_parts()
            .ok_or_else(|| ser::Error::custom(format!("exponent {e} does not fit in 64 bits")))?;
        seq.serialize_element(&(*p, n, d))?;
    }
    seq.end()
}

fn deserialize_factor_map<'de, D: Deserializer<'de>>(
    deserializer: D,
) -> std::result::Result<BTreeMap<u64, Rational>, D::Error> {
    let triples: Vec<(u64, i64, i64)> = Vec::deserialize(deserializer)?;
    let mut map = BTreeMap::new();
    for (p, n, d) in triples {
        if !is_prime(p) {
            return Err(de::Error::custom(format!("{p} is not prime")));
        }
        if d <= 0 || n == 0 {
            return Err(de::Error::custom(format!("bad exponent {n}/{d} for prime {p}")));
        }
        if map.insert(p, Rational::new(n, d)).is_some() {
            return Err(de::Error::custom(format!("prime {p} listed twice")));
        }
    }
    Ok(map)
}

fn log2_sum(map: &BTreeMap<u64, Rational>) -> f64 {
    map.iter()
        .map(|(p, e)| e.to_f64() * (*p as f64).log2())
        // Folding from +0.0: an empty f64 `sum` is -0.0.
        .fold(0.0, |acc, x| acc + x)
}

/// Exact sign of `Σ e_p · log2(p)`.
fn log_sign(map: &BTreeMap<u64, Rational>) -> Result<Ordering> {
    if map.is_empty() {
        return Ok(Ordering::Equal);
    }
    // Raise to the common denominator and compare integer products.
    let lcm = map
        .values()
        .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let bits: f64 = map
        .iter()
        .map(|(p, e)| (e.abs() * Rational(BigRational::from_integer(lcm.clone()))).to_f64() * (*p as f64).log2())
        .sum();
    if bits.is_finite() && bits < 4.0e6 {
        let mut pos = BigUint::one();
        let mut neg = BigUint::one();
        for (p, e) in map {
            let k = (e.numer() * &lcm / e.denom())
                .abs()
                .to_u32()
                .ok_or_else(|| Error::Arithmetic("exponent overflow".into()))?;
            let factor = BigUint::from(*p).pow(k);
            if e.is_positive() {
                pos *= factor;
            } else {
                neg *= factor;
            }
        }
        return Ok(pos.cmp(&neg));
    }
    let approx = log2_sum(map);
    if approx.abs() > 1e-6 {
        Ok(approx.partial_cmp(&0.0).unwrap_or(Ordering::Equal))
    } else {
        Err(Error::Arithmetic(
            "sign of a prime-log combination is too close to call".into(),
        ))
    }
}

/// A positive real `∏ p^e` over primes `p` with nonzero rational exponents.
/// The empty product is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PowerProduct {
    factors: BTreeMap<u64, Rational>,
}

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct::default()
    }

    /// Errors unless `q > 0`.
    pub fn from_rational(q: &Rational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Arithmetic(format!(
                "power products represent positive reals, got {q}"
            )));
        }
        let mut factors = BTreeMap::new();
        for (p, k) in factorize(biguint_to_u64(q.numer())?)? {
            add_into(&mut factors, p, &Rational::from(k as i64));
        }
        for (p, k) in factorize(biguint_to_u64(q.denom())?)? {
            add_into(&mut factors, p, &Rational::from(-(k as i64)));
        }
        Ok(PowerProduct { factors })
    }

    pub fn from_integer(n: u64) -> Result<Self> {
        Self::from_rational(&Rational(BigRational::from_integer(BigInt::from(n))))
    }

    /// Builds from explicit `(prime, exponent)` pairs. Non-primes are rejected.
    pub fn from_factors<I: IntoIterator<Item = (u64, Rational)>>(factors: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, e) in factors {
            if !is_prime(p) {
                return Err(Error::Arithmetic(format!("{p} is not prime")));
            }
            add_into(&mut map, p, &e);
        }
        Ok(PowerProduct { factors: map })
    }

    pub fn factors(&self) -> &BTreeMap<u64, Rational> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn pow(&self, e: &Rational) -> Self {
        if e.is_zero() {
            return PowerProduct::one();
        }
        PowerProduct {
            factors: self.factors.iter().map(|(p, x)| (*p, x * e)).collect(),
        }
    }

    pub fn recip(&self) -> Self {
        PowerProduct {
            factors: self.factors.iter().map(|(p, x)| (*p, -x)).collect(),
        }
    }

    pub fn log2(&self) -> ExactLog {
        ExactLog {
            terms: self.factors.clone(),
        }
    }

    /// The rational value, when every exponent is an integer.
    pub fn to_rational(&self) -> Option<Rational> {
        let mut acc = BigRational::one();
        for (p, e) in &self.factors {
            if !e.is_integer() {
                return None;
            }
            let k = e.numer().to_i32()?;
            acc *= BigRational::from_integer(BigInt::from(*p)).pow(k);
        }
        Some(Rational(acc))
    }

    pub fn approx(&self) -> f64 {
        log2_sum(&self.factors).exp2()
    }

    /// Exact comparison with 1.
    pub fn cmp_one(&self) -> Result<Ordering> {
        log_sign(&self.factors)
    }
}

impl<'a> Mul<&'a PowerProduct> for &'a PowerProduct {
    type Output = PowerProduct;
    fn mul(self, rhs: &'a PowerProduct) -> PowerProduct {
        let mut factors = self.factors.clone();
        for (p, e) in &rhs.factors {
            add_into(&mut factors, *p, e);
        }
        PowerProduct { factors }
    }
}

impl Mul for PowerProduct {
    type Output = PowerProduct;
    fn mul(self, rhs: PowerProduct) -> PowerProduct {
        &self * &rhs
    }
}

impl<'a> Div<&'a PowerProduct> for &'a PowerProduct {
    type Output = PowerProduct;
    fn div(self, rhs: &'a PowerProduct) -> PowerProduct {
        let mut factors = self.factors.clone();
        for (p, e) in &rhs.factors {
            add_into(&mut factors, *p, &-e);
        }
        PowerProduct { factors }
    }
}

impl Div for PowerProduct {
    type Output = PowerProduct;
    fn div(self, rhs: PowerProduct) -> PowerProduct {
        &self / &rhs
    }
}

impl Product for PowerProduct {
    fn product<I: Iterator<Item = PowerProduct>>(iter: I) -> Self {
        iter.fold(PowerProduct::one(), |acc, x| &acc * &x)
    }
}

fn fmt_exponent(e: &Rational) -> String {
    if e.is_integer() && e.is_positive() {
        e.to_string()
    } else {
        format!("({e})")
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if e.is_one() {
                    p.to_string()
                } else {
                    format!("{p}^{}", fmt_exponent(e))
                }
            })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

impl fmt::Debug for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PowerProduct({self})")
    }
}

impl Serialize for PowerProduct {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_factor_map(&self.factors, serializer)
    }
}

impl<'de> Deserialize<'de> for PowerProduct {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(PowerProduct {
            factors: deserialize_factor_map(deserializer)?,
        })
    }
}

/// A real number `Σ c_p · log2(p)` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactLog {
    terms: BTreeMap<u64, Rational>,
}

impl ExactLog {
    pub fn zero() -> Self {
        ExactLog::default()
    }

    pub fn terms(&self) -> &BTreeMap<u64, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return ExactLog::zero();
        }
        ExactLog {
            terms: self.terms.iter().map(|(p, x)| (*p, x * c)).collect(),
        }
    }

    /// `2^self`.
    pub fn exp2(&self) -> PowerProduct {
        PowerProduct {
            factors: self.terms.clone(),
        }
    }

    pub fn approx(&self) -> f64 {
        log2_sum(&self.terms)
    }

    /// Exact sign.
    pub fn signum(&self) -> Result<Ordering> {
        log_sign(&self.terms)
    }
}

impl<'a> Add<&'a ExactLog> for &'a ExactLog {
    type Output = ExactLog;
    fn add(self, rhs: &'a ExactLog) -> ExactLog {
        let mut terms = self.terms.clone();
        for (p, c) in &rhs.terms {
            add_into(&mut terms, *p, c);
        }
        ExactLog { terms }
    }
}

impl<'a> Sub<&'a ExactLog> for &'a ExactLog {
    type Output = ExactLog;
    fn sub(self, rhs: &'a ExactLog) -> ExactLog {
        let mut terms = self.terms.clone();
        for (p, c) in &rhs.terms {
            add_into(&mut terms, *p, &-c);
        }
        ExactLog { terms }
    }
}

impl Sum for ExactLog {
    fn sum<I: Iterator<Item = ExactLog>>(iter: I) -> Self {
        iter.fold(ExactLog::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for ExactLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let magnitude = if i == 0 { c.clone() } else { c.abs() };
            if i > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if *p == 2 {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "log2({p})")?;
            } else if magnitude == Rational::from_integer(-1) {
                write!(f, "-log2({p})")?;
            } else {
                write!(f, "{magnitude}·log2({p})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactLog({self})")
    }
}

impl Serialize for ExactLog {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_factor_map(&self.terms, serializer)
    }
}

impl<'de> Deserialize<'de> for ExactLog {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(ExactLog {
            terms: deserialize_factor_map(deserializer)?,
        })
    }
}

/// A nonnegative extended real: zero, a finite positive power product, or
/// infinity.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "tag", content = "factors", rename_all = "snake_case")]
pub enum ExtendedValue {
    Zero,
    Finite(PowerProduct),
    Infinite,
}

impl ExtendedValue {
    pub fn one() -> Self {
        ExtendedValue::Finite(PowerProduct::one())
    }

    /// Errors on negative input.
    pub fn from_rational(q: &Rational) -> Result<Self> {
        if q.is_zero() {
            Ok(ExtendedValue::Zero)
        } else {
            PowerProduct::from_rational(q).map(ExtendedValue::Finite)
        }
    }

    pub fn as_finite(&self) -> Option<&PowerProduct> {
        match self {
            ExtendedValue::Finite(p) => Some(p),
            _ => None,
        }
    }

    /// Infinity absorbs finite factors; `0 · ∞` is undefined.
    pub fn mul(&self, rhs: &ExtendedValue) -> Result<ExtendedValue> {
        use ExtendedValue::*;
        match (self, rhs) {
            (Zero, Infinite) | (Infinite, Zero) => {
                Err(Error::Arithmetic("0 · ∞ is undefined".into()))
            }
            (Zero, _) | (_, Zero) => Ok(Zero),
            (Infinite, _) | (_, Infinite) => Ok(Infinite),
            (Finite(a), Finite(b)) => Ok(Finite(a * b)),
        }
    }

    pub fn recip(&self) -> ExtendedValue {
        match self {
            ExtendedValue::Zero => ExtendedValue::Infinite,
            ExtendedValue::Infinite => ExtendedValue::Zero,
            ExtendedValue::Finite(p) => ExtendedValue::Finite(p.recip()),
        }
    }

    pub fn div(&self, rhs: &ExtendedValue) -> Result<ExtendedValue> {
        self.mul(&rhs.recip())
    }

    /// `x^0 = 1` for every `x`, including zero and infinity.
    pub fn pow(&self, e: &Rational) -> ExtendedValue {
        use ExtendedValue::*;
        if e.is_zero() {
            return ExtendedValue::one();
        }
        match self {
            Finite(p) => Finite(p.pow(e)),
            Zero if e.is_positive() => Zero,
            Zero => Infinite,
            Infinite if e.is_positive() => Infinite,
            Infinite => Zero,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            ExtendedValue::Zero => 0.0,
            ExtendedValue::Finite(p) => p.approx(),
            ExtendedValue::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Zero => f.write_str("0"),
            ExtendedValue::Finite(p) => write!(f, "{p}"),
            ExtendedValue::Infinite => f.write_str("∞"),
        }
    }
}

/// A nonnegative log-scale quantity that may be infinite.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(tag = "tag", content = "terms", rename_all = "snake_case")]
pub enum ExtendedLog {
    Finite(ExactLog),
    Infinite,
}

impl ExtendedLog {
    pub fn as_finite(&self) -> Option<&ExactLog> {
        match self {
            ExtendedLog::Finite(l) => Some(l),
            ExtendedLog::Infinite => None,
        }
    }

    pub fn exp2(&self) -> ExtendedValue {
        match self {
            ExtendedLog::Finite(l) => ExtendedValue::Finite(l.exp2()),
            ExtendedLog::Infinite => ExtendedValue::Infinite,
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            ExtendedLog::Finite(l) => l.approx(),
            ExtendedLog::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for ExtendedLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedLog::Finite(l) => write!(f, "{l}"),
            ExtendedLog::Infinite => f.write_str("∞"),
        }
    }
}
