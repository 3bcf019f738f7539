//! Exact volumes of the form `q * pi^k`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorial, format_rational, Rational};

/// First 64 decimal digits of pi, used only when rendering approximations.
const PI_DIGITS: &str = "3141592653589793238462643383279502884197169399375105820974944592";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VolumeValue {
    pub coefficient: Rational,
    pub pi_power: u32,
}

impl VolumeValue {
    pub fn new(coefficient: Rational, pi_power: u32) -> Self {
        VolumeValue {
            coefficient,
            pi_power,
        }
    }

    pub fn one() -> Self {
        VolumeValue::new(Rational::one(), 0)
    }

    /// Decimal rendering of `coefficient * pi^pi_power` to `digits`
    /// significant figures. Presentation only.
    pub fn approx(&self, digits: usize) -> String {
        let pi = Rational::new(
            PI_DIGITS.parse::<BigInt>().unwrap(),
            num_traits::pow(BigInt::from(10), PI_DIGITS.len() - 1),
        );
        let value = &self.coefficient * num_traits::pow(pi, self.pi_power as usize);
        to_significant(&value, digits)
    }
}

impl fmt::Display for VolumeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", format_rational(&self.coefficient)),
            1 => write!(f, "({})·π", format_rational(&self.coefficient)),
            k => write!(f, "({})·π^{k}", format_rational(&self.coefficient)),
        }
    }
}

/// Rounds half away from zero to `digits` significant figures.
///
/// Plain notation for decimal exponents in `-6..21`, `d.ddde±x` otherwise.
pub fn to_significant(value: &Rational, digits: usize) -> String {
    assert!(digits > 0);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let ten = BigInt::from(10);
    // exponent e with 10^e <= |value| < 10^(e+1)
    let mut exponent = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    let pow10 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    while abs < pow10(exponent) {
        exponent -= 1;
    }
    while abs >= pow10(exponent + 1) {
        exponent += 1;
    }
    let scaled = &abs / pow10(exponent - digits as i64 + 1);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = if r * 2 >= *scaled.denom() { q + 1 } else { q };
    if mantissa.to_string().len() > digits {
        mantissa /= 10;
        exponent += 1;
    }
    let mantissa = mantissa.to_string();
    let sign = if negative { "-" } else { "" };
    let body = if (-6..21).contains(&exponent) {
        if exponent >= 0 {
            let split = exponent as usize + 1;
            if split >= mantissa.len() {
                format!("{mantissa}{}", "0".repeat(split - mantissa.len()))
            } else {
                format!("{}.{}", &mantissa[..split], &mantissa[split..])
            }
        } else {
            format!("0.{}{mantissa}", "0".repeat((-exponent - 1) as usize))
        }
    } else {
        format!("{}.{}e{exponent}", &mantissa[..1], &mantissa[1..])
    };
    format!("{sign}{body}")
}

/// `C_k = (-4 pi)^k / (k+1)!`, the normalizing constant of the partition formula.
pub fn c_constant(k: i64) -> Result<VolumeValue> {
    if k < 0 {
        return Err(Error::InvalidArgs(format!(
            "k must be non-negative, got {k}"
        )));
    }
    let k = k as usize;
    let coefficient = Rational::new(num_traits::pow(BigInt::from(-4), k), factorial(k + 1));
    Ok(VolumeValue::new(coefficient, k as u32))
}
