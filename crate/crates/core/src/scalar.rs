//! Scalar abstraction shared by the algebra and group layers.
//!
//! Everything algebraic is written against [`Scalar`]. The exact
//! instantiation ([`BigRational`]) is what the library uses for all
//! certified work; `f64` is supported for quick numerical exploration,
//! where BCH denominators make results approximate.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + Send + Sync + 'static
{
    /// `num / den` in this scalar type.
    fn ratio(num: i64, den: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;

    fn to_f64(&self) -> f64;

    /// Nearest integer, ties to even.
    fn round_half_even(&self) -> BigInt;

    /// An upper bound `r >= 0` with `r^root >= |self|`, tight to within
    /// about one part in 2^20 for exact types.
    fn root_upper(&self, root: u32) -> Self;

    /// True if `self` is an integer.
    fn is_integral(&self) -> bool;
}

/// Scalars with exact equality and hashing, usable as search keys.
pub trait ExactScalar: Scalar + Eq + Hash + Ord {}

impl<T: Scalar + Eq + Hash + Ord> ExactScalar for T {}

fn pow_u32<S: Scalar>(x: &S, e: u32) -> S {
    let mut acc = S::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

impl Scalar for BigRational {
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn round_half_even(&self) -> BigInt {
        let floor = self.floor();
        let frac = self - &floor;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let fl = floor.to_integer();
        if frac > half || (frac == half && fl.is_odd()) {
            fl + 1
        } else {
            fl
        }
    }

    fn root_upper(&self, root: u32) -> Self {
        let target = self.abs();
        if root <= 1 || target.is_zero() {
            return target;
        }
        let approx = Scalar::to_f64(&target).powf(1.0 / root as f64);
        let scale = BigInt::from(1u64 << 20);
        let mut r = BigRational::from_f64((approx * (1u64 << 20) as f64).ceil())
            .map(|n| BigRational::new(n.to_integer(), scale.clone()))
            .unwrap_or_else(|| target.clone() + BigRational::one());
        let step = BigRational::new(BigInt::one(), scale);
        while pow_u32(&r, root) < target {
            r += step.clone();
        }
        r
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

impl Scalar for Ratio<i64> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn from_bigint(n: &BigInt) -> Self {
        Ratio::from_integer(n.to_i64().expect("integer out of i64 range"))
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn round_half_even(&self) -> BigInt {
        let big = BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()));
        big.round_half_even()
    }

    fn root_upper(&self, root: u32) -> Self {
        let big = BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()));
        let r = big.root_upper(root);
        Ratio::new(
            r.numer().to_i64().expect("overflow"),
            r.denom().to_i64().expect("overflow"),
        )
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }
}

impl Scalar for f64 {
    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn round_half_even(&self) -> BigInt {
        let r = self.round();
        let r = if (self - self.trunc()).abs() == 0.5 && (r as i64) % 2 != 0 {
            r - self.signum()
        } else {
            r
        };
        BigInt::from_f64(r).unwrap_or_default()
    }

    fn root_upper(&self, root: u32) -> Self {
        self.abs().powf(1.0 / root.max(1) as f64)
    }

    fn is_integral(&self) -> bool {
        self.fract() == 0.0
    }
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("bad rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str_radix(num, 10).map_err(|_| bad())?;
    let den = BigInt::from_str_radix(den, 10).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `"p/q"`, or `"p"` when integral.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Converts an exact rational into any scalar type.
pub fn from_rational<S: Scalar>(q: &BigRational) -> S {
    S::from_bigint(q.numer()) / S::from_bigint(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn rationals_parse_and_print() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), q(-4, 1));
        assert_eq!(format_rational(&q(-6, 4)), "-3/2");
        assert_eq!(format_rational(&q(8, 4)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn round_half_even_ties() {
        assert_eq!(q(5, 2).round_half_even(), BigInt::from(2));
        assert_eq!(q(7, 2).round_half_even(), BigInt::from(4));
        assert_eq!(q(-5, 2).round_half_even(), BigInt::from(-2));
        assert_eq!(q(-7, 3).round_half_even(), BigInt::from(-2));
        assert_eq!(2.5f64.round_half_even(), BigInt::from(2));
        assert_eq!(Ratio::<i64>::new(3, 2).round_half_even(), BigInt::from(2));
    }

    #[test]
    fn root_upper_is_an_upper_bound() {
        assert_eq!(q(4, 1).root_upper(2), q(2, 1));
        assert_eq!(q(27, 1).root_upper(3), q(3, 1));
        let r = q(2, 1).root_upper(2);
        assert!(r.clone() * r.clone() >= q(2, 1));
        assert!(r < q(14143, 10000));
    }
}
