//! Exact arithmetic in `Z_(p)`, in `F_p`, and binomial coefficients mod `p`.
//!
//! A [`LocalInt`] is an ordinary normalized rational number. Whether it is an
//! element of `Z_(p)` depends on the ambient prime, so every operation that
//! needs the local structure takes the prime explicitly and rejects values
//! whose denominator is divisible by it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A prime number, validated on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q.saturating_mul(q) <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// A `p`-adic valuation; zero has valuation `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_at_least(self, bound: u64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer.
fn int_valuation(n: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    if let (Some(mut m), Some(q)) = (n.to_i128(), p.to_i128()) {
        let mut v = 0;
        while m % q == 0 {
            v += 1;
            m /= q;
        }
        return v;
    }
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

/// An exact rational number in normalized form, used as an element of `Z_(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalInt(BigRational);

impl LocalInt {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<LocalInt> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(LocalInt(BigRational::new(numer.into(), denom)))
    }

    /// Builds `numer/denom` and checks that it lies in `Z_(p)`.
    pub fn new_local(
        numer: impl Into<BigInt>,
        denom: impl Into<BigInt>,
        p: Prime,
    ) -> Result<LocalInt> {
        let x = LocalInt::new(numer, denom)?;
        x.check_local(p)?;
        Ok(x)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> LocalInt {
        LocalInt(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> LocalInt {
        LocalInt(BigRational::zero())
    }

    pub fn one() -> LocalInt {
        LocalInt(BigRational::one())
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_local(&self, p: Prime) -> bool {
        !self.0.denom().is_multiple_of(&p.to_bigint())
    }

    pub fn check_local(&self, p: Prime) -> Result<()> {
        if self.is_local(p) {
            Ok(())
        } else {
            Err(Error::NotLocal { value: self.to_string(), p: p.get() })
        }
    }

    /// The `p`-adic valuation: the exponent of `p` in the numerator.
    pub fn val_p(&self, p: Prime) -> Result<Valuation> {
        self.check_local(p)?;
        if self.is_zero() {
            return Ok(Valuation::Infinite);
        }
        Ok(Valuation::Finite(int_valuation(self.numer(), &p.to_bigint())))
    }

    pub fn is_unit(&self, p: Prime) -> bool {
        matches!(self.val_p(p), Ok(Valuation::Finite(0)))
    }

    /// Image under `Z_(p) -> F_p`.
    pub fn reduce_mod_p(&self, p: Prime) -> Result<FpScalar> {
        self.check_local(p)?;
        let pb = p.to_bigint();
        let num = self.numer().mod_floor(&pb).to_u64().expect("residue below p");
        let den = self.denom().mod_floor(&pb).to_u64().expect("residue below p");
        let den = FpScalar::new(den, p);
        let inv = den.inv().expect("denominator is a unit mod p");
        Ok(FpScalar::new(num, p) * inv)
    }

    /// Multiplicative inverse, defined only for units of `Z_(p)`.
    pub fn inv_unit(&self, p: Prime) -> Result<LocalInt> {
        if !self.is_unit(p) {
            self.check_local(p)?;
            return Err(Error::NonUnitDivisor { divisor: self.to_string(), p: p.get() });
        }
        Ok(LocalInt(self.0.recip()))
    }

    /// `self / divisor`, rejected unless the divisor is a unit of `Z_(p)`.
    pub fn checked_div(&self, divisor: &LocalInt, p: Prime) -> Result<LocalInt> {
        Ok(self * &divisor.inv_unit(p)?)
    }

    pub fn pow(&self, n: u32) -> LocalInt {
        LocalInt(BigRational::new_raw(self.numer().pow(n), self.denom().pow(n)))
    }

    pub fn abs(&self) -> LocalInt {
        LocalInt(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

impl From<i64> for LocalInt {
    fn from(n: i64) -> LocalInt {
        LocalInt::from_integer(n)
    }
}

impl From<u64> for LocalInt {
    fn from(n: u64) -> LocalInt {
        LocalInt::from_integer(n)
    }
}

impl From<BigInt> for LocalInt {
    fn from(n: BigInt) -> LocalInt {
        LocalInt::from_integer(n)
    }
}

impl fmt::Display for LocalInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for LocalInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<LocalInt> {
        let bad = || Error::BadLiteral(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        LocalInt::new(num, den)
    }
}

impl Serialize for LocalInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&LocalInt> for &LocalInt {
            type Output = LocalInt;
            fn $method(self, rhs: &LocalInt) -> LocalInt {
                LocalInt((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<LocalInt> for LocalInt {
            type Output = LocalInt;
            fn $method(self, rhs: LocalInt) -> LocalInt {
                LocalInt(self.0.$method(rhs.0))
            }
        }
        impl $trait<&LocalInt> for LocalInt {
            type Output = LocalInt;
            fn $method(self, rhs: &LocalInt) -> LocalInt {
                LocalInt(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for LocalInt {
    type Output = LocalInt;
    fn neg(self) -> LocalInt {
        LocalInt(-self.0)
    }
}

impl Neg for &LocalInt {
    type Output = LocalInt;
    fn neg(self) -> LocalInt {
        LocalInt(-&self.0)
    }
}

impl std::iter::Sum for LocalInt {
    fn sum<I: Iterator<Item = LocalInt>>(iter: I) -> LocalInt {
        iter.fold(LocalInt::zero(), |acc, x| acc + x)
    }
}

/// A residue class in `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u64,
    p: Prime,
}

impl FpScalar {
    pub fn new(value: u64, p: Prime) -> FpScalar {
        FpScalar { value: value % p.get(), p }
    }

    pub fn from_i64(value: i64, p: Prime) -> FpScalar {
        let m = p.get() as i128;
        FpScalar { value: (value as i128).rem_euclid(m) as u64, p }
    }

    pub fn zero(p: Prime) -> FpScalar {
        FpScalar { value: 0, p }
    }

    pub fn one(p: Prime) -> FpScalar {
        FpScalar::new(1, p)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn prime(self) -> Prime {
        self.p
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut e: u64) -> FpScalar {
        let mut base = self;
        let mut acc = FpScalar::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Inverse via Fermat's little theorem; `None` for zero.
    pub fn inv(self) -> Option<FpScalar> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.p.get() - 2))
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FpScalar {
    type Output = FpScalar;
    fn add(self, rhs: FpScalar) -> FpScalar {
        debug_assert_eq!(self.p, rhs.p);
        let m = self.p.get() as u128;
        FpScalar { value: ((self.value as u128 + rhs.value as u128) % m) as u64, p: self.p }
    }
}

impl Sub for FpScalar {
    type Output = FpScalar;
    fn sub(self, rhs: FpScalar) -> FpScalar {
        self + (-rhs)
    }
}

impl Neg for FpScalar {
    type Output = FpScalar;
    fn neg(self) -> FpScalar {
        if self.value == 0 {
            self
        } else {
            FpScalar { value: self.p.get() - self.value, p: self.p }
        }
    }
}

impl Mul for FpScalar {
    type Output = FpScalar;
    fn mul(self, rhs: FpScalar) -> FpScalar {
        debug_assert_eq!(self.p, rhs.p);
        let m = self.p.get() as u128;
        FpScalar { value: ((self.value as u128 * rhs.value as u128) % m) as u64, p: self.p }
    }
}

/// Binomial coefficient of two digits below `p`, directly in `F_p`.
fn small_binom(a: u64, b: u64, p: Prime) -> FpScalar {
    if b > a {
        return FpScalar::zero(p);
    }
    let b = b.min(a - b);
    let mut num = FpScalar::one(p);
    let mut den = FpScalar::one(p);
    for t in 0..b {
        num = num * FpScalar::new(a - t, p);
        den = den * FpScalar::new(t + 1, p);
    }
    num * den.inv().expect("digits below p give unit factorials")
}

/// `binom(a, b) mod p` by Lucas' theorem. Negative arguments and `b > a`
/// give zero.
pub fn binom_mod_p(a: i64, b: i64, p: Prime) -> FpScalar {
    if a < 0 || b < 0 || b > a {
        return FpScalar::zero(p);
    }
    let (mut a, mut b) = (a as u64, b as u64);
    let q = p.get();
    let mut acc = FpScalar::one(p);
    while b > 0 {
        let term = small_binom(a % q, b % q, p);
        if term.is_zero() {
            return term;
        }
        acc = acc * term;
        a /= q;
        b /= q;
    }
    acc
}

/// Multinomial coefficient `(Σ parts)! / Π parts!` mod `p`, as the product of
/// the binomials of the running partial sums.
pub fn multinomial_mod_p(parts: &[u64], p: Prime) -> FpScalar {
    let mut total = 0i64;
    let mut acc = FpScalar::one(p);
    for &k in parts {
        total += k as i64;
        acc = acc * binom_mod_p(total, k as i64, p);
    }
    acc
}

/// Exact `λ^N` for a unit `λ` of `Z_(p)`.
///
/// For `λ ≡ 1 mod p` the result satisfies `val_p(λ^(p^r) - 1) >= r + 1`.
pub fn unit_power(lambda: &LocalInt, n: u32, p: Prime) -> Result<LocalInt> {
    let v = lambda.val_p(p)?;
    if v != Valuation::Finite(0) {
        return Err(Error::NotAUnit {
            value: lambda.to_string(),
            valuation: v.to_string(),
            p: p.get(),
        });
    }
    Ok(lambda.pow(n))
}
