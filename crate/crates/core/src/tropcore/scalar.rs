//! Exact rational scalars.
//!
//! Values that are integers fitting in an `i64` are kept in machine words;
//! everything else lives in a boxed [`BigRational`]. The representation is
//! canonical, so structural equality is numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Result, TropError};

/// An exact rational number, the carrier of the min-plus semiring.
///
/// Tropical addition is [`TropScalar::min`], tropical multiplication is `+`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TropScalar(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Int(i64),
    // Never an integer that fits in i64.
    Big(Box<BigRational>),
}

impl TropScalar {
    pub const ZERO: TropScalar = TropScalar(Repr::Int(0));

    pub const fn from_int(v: i64) -> Self {
        TropScalar(Repr::Int(v))
    }

    /// `num / den`, reduced. Fails when `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(TropError::BadRational {
                text: format!("{num}/{den}"),
                reason: "zero denominator",
            });
        }
        Ok(Self::from_big(BigRational::new(num.into(), den.into())))
    }

    pub fn from_big(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i64() {
                return TropScalar(Repr::Int(v));
            }
        }
        TropScalar(Repr::Big(Box::new(r)))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Int(v) => BigRational::from_integer(BigInt::from(*v)),
            Repr::Big(r) => (**r).clone(),
        }
    }

    /// The value as an `i64` when it is an integer in range.
    pub fn as_i64(&self) -> Option<i64> {
        match self.0 {
            Repr::Int(v) => Some(v),
            Repr::Big(_) => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Int(_) => true,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Int(0))
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Int(v) => *v > 0,
            Repr::Big(r) => r.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Int(v) => *v < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Tropical addition.
    pub fn min(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Multiplies by a non-negative integer.
    pub fn times(&self, k: u64) -> Self {
        if let (Repr::Int(v), Ok(k)) = (&self.0, i64::try_from(k)) {
            if let Some(p) = v.checked_mul(k) {
                return TropScalar(Repr::Int(p));
            }
        }
        Self::from_big(self.to_big() * BigRational::from_integer(BigInt::from(k)))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Int(v) => BigInt::from(*v),
            Repr::Big(r) => r.floor().to_integer(),
        }
    }
}

impl Default for TropScalar {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<i64> for TropScalar {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<i32> for TropScalar {
    fn from(v: i32) -> Self {
        Self::from_int(v.into())
    }
}

impl From<BigRational> for TropScalar {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

impl PartialOrd for TropScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TropScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Int(a), Repr::Int(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Add for &TropScalar {
    type Output = TropScalar;

    fn add(self, rhs: &TropScalar) -> TropScalar {
        if let (Repr::Int(a), Repr::Int(b)) = (&self.0, &rhs.0) {
            if let Some(s) = a.checked_add(*b) {
                return TropScalar(Repr::Int(s));
            }
        }
        TropScalar::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for &TropScalar {
    type Output = TropScalar;

    fn sub(self, rhs: &TropScalar) -> TropScalar {
        if let (Repr::Int(a), Repr::Int(b)) = (&self.0, &rhs.0) {
            if let Some(s) = a.checked_sub(*b) {
                return TropScalar(Repr::Int(s));
            }
        }
        TropScalar::from_big(self.to_big() - rhs.to_big())
    }
}

impl Mul for &TropScalar {
    type Output = TropScalar;

    /// Ordinary (not tropical) product.
    fn mul(self, rhs: &TropScalar) -> TropScalar {
        if let (Repr::Int(a), Repr::Int(b)) = (&self.0, &rhs.0) {
            if let Some(p) = a.checked_mul(*b) {
                return TropScalar(Repr::Int(p));
            }
        }
        TropScalar::from_big(self.to_big() * rhs.to_big())
    }
}

impl Neg for &TropScalar {
    type Output = TropScalar;

    fn neg(self) -> TropScalar {
        if let Repr::Int(a) = self.0 {
            if let Some(n) = a.checked_neg() {
                return TropScalar(Repr::Int(n));
            }
        }
        TropScalar::from_big(-self.to_big())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TropScalar {
            type Output = TropScalar;
            fn $m(self, rhs: TropScalar) -> TropScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&TropScalar> for TropScalar {
            type Output = TropScalar;
            fn $m(self, rhs: &TropScalar) -> TropScalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TropScalar {
    type Output = TropScalar;
    fn neg(self) -> TropScalar {
        -&self
    }
}

impl std::iter::Sum for TropScalar {
    fn sum<I: Iterator<Item = TropScalar>>(iter: I) -> TropScalar {
        iter.fold(TropScalar::ZERO, |acc, x| &acc + &x)
    }
}

impl<'a> std::iter::Sum<&'a TropScalar> for TropScalar {
    fn sum<I: Iterator<Item = &'a TropScalar>>(iter: I) -> TropScalar {
        iter.fold(TropScalar::ZERO, |acc, x| &acc + x)
    }
}

impl fmt::Display for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Int(v) => write!(f, "{v}"),
            Repr::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for TropScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn is_decimal_int(s: &str) -> bool {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

impl FromStr for TropScalar {
    type Err = TropError;

    /// Parses `p` or `p/q` in decimal, with `q > 0` and an optional sign on `p`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason| TropError::BadRational {
            text: s.to_string(),
            reason,
        };
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p, Some(q)),
            None => (s, None),
        };
        if !is_decimal_int(num) {
            return Err(bad("numerator is not a decimal integer"));
        }
        let num: BigInt = num.parse().map_err(|_| bad("numerator is not a decimal integer"))?;
        let den: BigInt = match den {
            None => BigInt::one(),
            Some(q) => {
                if q.is_empty() || !q.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad("denominator is not a positive decimal integer"));
                }
                let q: BigInt = q.parse().map_err(|_| bad("denominator is not a decimal integer"))?;
                if q.is_zero() {
                    return Err(bad("zero denominator"));
                }
                q
            }
        };
        Ok(Self::from_big(BigRational::new(num, den)))
    }
}

impl Serialize for TropScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
