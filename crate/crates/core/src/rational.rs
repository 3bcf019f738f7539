//! Exact rationals and the integer machinery the volume engines run on.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. The engines avoid per-term fraction arithmetic by
//! rewriting every weight over one common denominator and accumulating plain
//! integers; [`ExactInt`] lets the same loop run on checked `i128` first and
//! fall back to `BigInt` when a value would overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.375"` exactly.
///
/// Surrounding whitespace and whitespace around the slash are accepted.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::NonRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = parse_integer(num.trim()).ok_or_else(bad)?;
        let den = parse_integer(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (negative, whole) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if (whole.is_empty() && frac.is_empty())
            || !whole.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{whole}{frac}");
        let mantissa: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    parse_integer(s).map(Rational::from_integer).ok_or_else(bad)
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses a comma-separated list of rationals.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

/// Renders a rational as `p/q`, or `p` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `max(0, x)^e`, with a clamped factor counting as zero even when `e = 0`.
pub fn clamped_pow(x: &Rational, exponent: usize) -> Rational {
    if x.is_positive() {
        num_traits::pow(x.clone(), exponent)
    } else {
        Rational::zero()
    }
}

/// Values rewritten over their least common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonDenominator {
    pub numerators: Vec<BigInt>,
    pub denominator: BigInt,
}

impl CommonDenominator {
    pub fn new(values: &[Rational]) -> Self {
        let denominator = values
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let numerators = values
            .iter()
            .map(|v| v.numer() * (&denominator / v.denom()))
            .collect();
        CommonDenominator {
            numerators,
            denominator,
        }
    }

    /// The same data as `i128`, when every entry fits.
    pub fn to_i128(&self) -> Option<(Vec<i128>, i128)> {
        let nums = self
            .numerators
            .iter()
            .map(|v| v.to_i128())
            .collect::<Option<Vec<_>>>()?;
        Some((nums, self.denominator.to_i128()?))
    }
}

/// Integer arithmetic that may refuse to produce a result (overflow).
pub(crate) trait ExactInt: Clone + Sized {
    fn from_i64(v: i64) -> Self;
    fn add(&self, rhs: &Self) -> Option<Self>;
    fn sub(&self, rhs: &Self) -> Option<Self>;
    fn mul(&self, rhs: &Self) -> Option<Self>;
    fn is_positive(&self) -> bool;
    fn into_bigint(self) -> BigInt;

    fn pow(&self, exponent: usize) -> Option<Self> {
        let mut acc = Self::from_i64(1);
        for _ in 0..exponent {
            acc = acc.mul(self)?;
        }
        Some(acc)
    }
}

impl ExactInt for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn add(&self, rhs: &Self) -> Option<Self> {
        self.checked_add(*rhs)
    }
    fn sub(&self, rhs: &Self) -> Option<Self> {
        self.checked_sub(*rhs)
    }
    fn mul(&self, rhs: &Self) -> Option<Self> {
        self.checked_mul(*rhs)
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn into_bigint(self) -> BigInt {
        BigInt::from(self)
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Option<Self> {
        Some(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn into_bigint(self) -> BigInt {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" 3 / 6 ").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0.375").unwrap(), rat(3, 8));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert_eq!(parse_rational("4/-8").unwrap(), rat(-1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in [
            "", "abc", "1/0", "1//2", "1.2.3", "0x10", "1e-3", ".", "1/ ", "nan",
        ] {
            assert!(
                matches!(parse_rational(s), Err(Error::NonRational(_))),
                "{s:?} should not parse"
            );
        }
    }

    #[test]
    fn common_denominator_is_lcm() {
        let cd = CommonDenominator::new(&[rat(1, 4), rat(1, 6), rat(2, 3)]);
        assert_eq!(cd.denominator, BigInt::from(12));
        assert_eq!(
            cd.numerators,
            vec![BigInt::from(3), BigInt::from(2), BigInt::from(8)]
        );
    }

    #[test]
    fn clamp_kills_nonpositive_even_at_exponent_zero() {
        assert_eq!(clamped_pow(&rat(-1, 3), 0), Rational::zero());
        assert_eq!(clamped_pow(&Rational::zero(), 2), Rational::zero());
        assert_eq!(clamped_pow(&rat(1, 3), 0), int(1));
        assert_eq!(clamped_pow(&rat(1, 3), 2), rat(1, 9));
    }

    #[test]
    fn checked_i128_overflow_is_reported() {
        let big: i128 = i128::MAX / 2 + 1;
        assert_eq!(ExactInt::mul(&big, &2), None);
        assert_eq!(ExactInt::pow(&3i128, 4), Some(81));
    }
}
