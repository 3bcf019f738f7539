//! Torus-localization volume as a sum over fixed points.
//!
//! A fixed point sends the marked points in `F` to infinity and the rest to
//! zero. Its moment value is `mu(F) = sum_{i not in F} d_i - sum_{i in F} d_i`,
//! which is also the Donaldson-Futaki invariant of the test configuration
//! colliding the points of `F`. Only fixed points with `mu(F) > 0` contribute:
//!
//! ```text
//! Vol = -(2 pi)^{n-3} / (2 (n-3)!) * sum_{mu(F) > 0} (-1)^{|F|} mu(F)^{n-3}
//! ```
//!
//! This holds for Fano and Calabi-Yau weights. No cap is placed on `|F|`;
//! positivity of the moment is the only filter.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{subsets_of_size, IndexSubset};
use crate::error::{Error, Result};
use crate::rational::{clamped_pow, factorial, int, CommonDenominator, ExactInt, Rational};
use crate::volume::VolumeValue;
use crate::weights::{git_nonempty, is_calabi_yau, WeightVector};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FixedPoint {
    /// Indices sent to infinity.
    pub flipped: IndexSubset,
    pub moment: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub fixed_point: FixedPoint,
    /// `(-1)^{|F|}`, either `1` or `-1`.
    pub sign: i8,
    /// `mu(F)^{n-3}`.
    pub contribution: Rational,
}

/// Per-fixed-point view of the localization sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermBreakdown {
    pub n: usize,
    pub terms: Vec<Term>,
    /// Signed sum of the contributions.
    pub total: Rational,
}

impl TermBreakdown {
    /// `total` times the localization prefactor.
    pub fn volume(&self) -> VolumeValue {
        let prefactor = localization_prefactor(self.n);
        VolumeValue::new(&prefactor.coefficient * &self.total, prefactor.pi_power)
    }
}

/// `-(2 pi)^{n-3} / (2 (n-3)!)`.
pub fn localization_prefactor(n: usize) -> VolumeValue {
    let k = n - 3;
    let coefficient = -Rational::new(
        num_traits::pow(BigInt::from(2), k),
        BigInt::from(2) * factorial(k),
    );
    VolumeValue::new(coefficient, k as u32)
}

pub fn moment_value(w: &WeightVector, flipped: &IndexSubset) -> Rational {
    w.total() - w.subset_sum(flipped.indices()) * int(2)
}

/// Donaldson-Futaki invariant of the test configuration colliding `flipped`.
///
/// Numerically the moment value of the matching fixed point.
pub fn df_invariant(w: &WeightVector, flipped: &IndexSubset) -> Rational {
    moment_value(w, flipped)
}

/// Fixed points with strictly positive moment, by size then lexicographically.
pub fn positive_fixed_points(w: &WeightVector) -> Result<Vec<FixedPoint>> {
    positive_fixed_points_with(w, &Limits::default())
}

pub fn positive_fixed_points_with(w: &WeightVector, limits: &Limits) -> Result<Vec<FixedPoint>> {
    let n = w.len();
    check_subset_cap(n, limits)?;
    let mut out = Vec::new();
    for k in 0..=n {
        for flipped in subsets_of_size(n, k)? {
            let moment = moment_value(w, &flipped);
            if moment.is_positive() {
                out.push(FixedPoint { flipped, moment });
            }
        }
    }
    Ok(out)
}

fn check_subset_cap(n: usize, limits: &Limits) -> Result<()> {
    if n > limits.subset_cap {
        return Err(Error::UnsupportedSize {
            n,
            cap: limits.subset_cap,
        });
    }
    Ok(())
}

fn check_localization_domain(w: &WeightVector, limits: &Limits) -> Result<()> {
    check_subset_cap(w.len(), limits)?;
    let total = w.total();
    if total > int(2) {
        return Err(Error::GeneralTypeUnsupported(total));
    }
    if !git_nonempty(w) {
        return Err(Error::EmptyQuotient);
    }
    Ok(())
}

pub fn localization_volume(w: &WeightVector) -> Result<VolumeValue> {
    localization_volume_with(w, &Limits::default())
}

pub fn localization_volume_with(w: &WeightVector, limits: &Limits) -> Result<VolumeValue> {
    check_localization_domain(w, limits)?;
    let n = w.len();
    let scaled = CommonDenominator::new(w.as_slice());
    let sum = scaled
        .to_i128()
        .and_then(|(nums, _)| signed_moment_sum(&nums))
        .unwrap_or_else(|| {
            signed_moment_sum(&scaled.numerators).expect("BigInt accumulation cannot overflow")
        });
    let prefactor = localization_prefactor(n);
    let total = Rational::new(sum, num_traits::pow(scaled.denominator, n - 3));
    Ok(VolumeValue::new(
        prefactor.coefficient * total,
        prefactor.pi_power,
    ))
}

/// `sum_{mu > 0} (-1)^{|F|} m(F)^{n-3}` with `m(F) = S - 2 s_F` in scaled units.
///
/// Walks all subsets in Gray-code order so each step flips one index.
fn signed_moment_sum<I: ExactInt>(nums: &[I]) -> Option<BigInt> {
    let n = nums.len();
    let exponent = n - 3;
    let mut total_weight = I::from_i64(0);
    for v in nums {
        total_weight = total_weight.add(v)?;
    }
    let mut flipped_sum = I::from_i64(0);
    let mut mask: u64 = 0;
    let mut odd = false;
    let mut acc = I::from_i64(0);
    let count: u64 = 1 << n;
    for step in 0..count {
        if step > 0 {
            let bit = step.trailing_zeros() as usize;
            mask ^= 1 << bit;
            flipped_sum = if mask >> bit & 1 == 1 {
                flipped_sum.add(&nums[bit])?
            } else {
                flipped_sum.sub(&nums[bit])?
            };
            odd = !odd;
        }
        let moment = total_weight.sub(&flipped_sum.add(&flipped_sum)?)?;
        if moment.is_positive() {
            let term = moment.pow(exponent)?;
            acc = if odd {
                acc.sub(&term)?
            } else {
                acc.add(&term)?
            };
        }
    }
    Some(acc.into_bigint())
}

/// Every positive fixed point with its sign and `mu^{n-3}`.
pub fn localization_breakdown(w: &WeightVector) -> Result<TermBreakdown> {
    localization_breakdown_with(w, &Limits::default())
}

pub fn localization_breakdown_with(w: &WeightVector, limits: &Limits) -> Result<TermBreakdown> {
    check_localization_domain(w, limits)?;
    let n = w.len();
    let mut total = Rational::zero();
    let terms: Vec<Term> = positive_fixed_points_with(w, limits)?
        .into_iter()
        .map(|fixed_point| {
            let sign: i8 = if fixed_point.flipped.len() % 2 == 0 {
                1
            } else {
                -1
            };
            let contribution = num_traits::pow(fixed_point.moment.clone(), n - 3);
            if sign > 0 {
                total += &contribution;
            } else {
                total -= &contribution;
            }
            Term {
                fixed_point,
                sign,
                contribution,
            }
        })
        .collect();
    Ok(TermBreakdown { n, terms, total })
}

/// Calabi-Yau specialization with `mu(I) = 2 (1 - sum_I d)` substituted:
///
/// ```text
/// Vol = 2^{2n-7} / (n-3)! * pi^{n-3} * sum_I (-1)^{|I|+1} max(0, 1 - sum_I d)^{n-3}
/// ```
///
/// over all subsets `I`, the empty one included. A clamped factor counts as
/// zero even when `n = 3`.
pub fn cy_reduced_volume(w: &WeightVector) -> Result<VolumeValue> {
    cy_reduced_volume_with(w, &Limits::default())
}

pub fn cy_reduced_volume_with(w: &WeightVector, limits: &Limits) -> Result<VolumeValue> {
    is_calabi_yau(w)?;
    let n = w.len();
    check_subset_cap(n, limits)?;
    let one = Rational::one();
    let mut sum = Rational::zero();
    for k in 0..=n {
        let mut level = Rational::zero();
        for subset in subsets_of_size(n, k)? {
            level += clamped_pow(&(&one - w.subset_sum(subset.indices())), n - 3);
        }
        if k % 2 == 1 {
            sum += level;
        } else {
            sum -= level;
        }
    }
    // 2^{2n-7}, which is 1/2 when n = 3
    let power_of_two = if 2 * n >= 7 {
        Rational::from_integer(num_traits::pow(BigInt::from(2), 2 * n - 7))
    } else {
        Rational::new(BigInt::one(), BigInt::from(2))
    };
    let prefactor = power_of_two / Rational::from_integer(factorial(n - 3));
    Ok(VolumeValue::new(prefactor * sum, (n - 3) as u32))
}
