//! Scalar traits shared by the polynomial, ideal and matrix layers.
//!
//! Everything above this module is exact: coefficient fields must have a
//! decidable equality, so floating point types are deliberately not `Field`s.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// An exact field of characteristic zero.
pub trait Field:
    Clone + PartialEq + Eq + Debug + Display + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Embeds an arbitrary rational; callers only pass values that fit.
    fn from_rational(q: &BigRational) -> Self;
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Field for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn from_rational(q: &BigRational) -> Self {
        let n = q.numer().to_i64().expect("numerator overflows i64");
        let d = q.denom().to_i64().expect("denominator overflows i64");
        Ratio::new(n, d)
    }
}

/// A Euclidean integer type usable for lattice normal forms.
pub trait IntScalar:
    Clone + Eq + Ord + Debug + Display + Integer + Signed + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;
    fn to_big(&self) -> BigInt;
}

impl IntScalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl IntScalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn rational_to_i64(q: &BigRational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Least common multiple of the denominators of `row`.
pub fn denominator_lcm(row: &[BigRational]) -> BigInt {
    row.iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Scales a rational row to a primitive integer row with the same span.
/// The sign is preserved. Returns `None` for the zero row.
pub fn primitive_integer_row(row: &[BigRational]) -> Option<Vec<i64>> {
    let l = denominator_lcm(row);
    let ints: Vec<BigInt> = row
        .iter()
        .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return None;
    }
    ints.iter().map(|v| (v / &g).to_i64()).collect()
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, x| acc.gcd(x))
}
