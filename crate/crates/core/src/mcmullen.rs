//! Set-partition volume formula for Calabi-Yau weights.
//!
//! ```text
//! Vol = C_{n-3} * sum_P (-1)^{|P|+1} (|P|-3)! * prod_{B in P} max(0, 1 - sum_B d)^{|B|-1}
//! ```
//!
//! `P` runs over partitions of `{1..n}` with at least three blocks; the
//! `(|P| - 3)!` factor has no meaning below that, so smaller partitions are
//! never generated.
//!
//! With all weights written as `p_i / D` the block product for a partition
//! into `k` blocks is an integer over `D^{n-k}`, so the sum is accumulated as
//!
//! ```text
//! T = sum_k (-1)^{k+1} (k-3)! D^{k-3} * sum_{|P|=k} prod_B (D - s_B)^{|B|-1}
//! ```
//!
//! and the coefficient is `(-4)^{n-3} / (n-2)! * T / D^{n-3}`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combinatorics::partitions_into_k_blocks_with;
use crate::error::{Error, Result};
use crate::rational::{clamped_pow, factorial, CommonDenominator, ExactInt, Rational};
use crate::volume::{c_constant, VolumeValue};
use crate::weights::{is_calabi_yau, WeightVector};
use crate::Limits;

/// `max(0, 1 - sum_B d)^{|B| - 1}` for a nonempty block of 1-based indices.
pub fn block_factor(w: &WeightVector, block: &[usize]) -> Rational {
    if block.len() <= 1 {
        return Rational::one();
    }
    clamped_pow(&(Rational::one() - w.subset_sum(block)), block.len() - 1)
}

pub fn mcmullen_volume(w: &WeightVector) -> Result<VolumeValue> {
    mcmullen_volume_with(w, &Limits::default())
}

pub fn mcmullen_volume_with(w: &WeightVector, limits: &Limits) -> Result<VolumeValue> {
    is_calabi_yau(w)?;
    let n = w.len();
    if n > limits.partition_cap {
        return Err(Error::UnsupportedSize {
            n,
            cap: limits.partition_cap,
        });
    }
    let scaled = CommonDenominator::new(w.as_slice());
    let total = match scaled.to_i128() {
        Some((nums, den)) => scaled_partition_sum(&nums, &den, limits),
        None => None,
    };
    let total = match total {
        Some(t) => t,
        None => scaled_partition_sum(&scaled.numerators, &scaled.denominator, limits)
            .expect("BigInt accumulation cannot overflow"),
    };
    let c = c_constant(n as i64 - 3)?;
    let coefficient =
        c.coefficient * Rational::new(total, num_traits::pow(scaled.denominator.clone(), n - 3));
    Ok(VolumeValue::new(coefficient, c.pi_power))
}

/// Integer sum `T`; `None` if the integer type overflows.
fn scaled_partition_sum<I: ExactInt>(nums: &[I], den: &I, limits: &Limits) -> Option<BigInt> {
    let n = nums.len();
    let mut total = I::from_i64(0);
    let mut sums = vec![I::from_i64(0); n];
    let mut sizes = vec![0usize; n];
    let mut den_power = I::from_i64(1);
    for k in 3..=n {
        let mut level = I::from_i64(0);
        let mut stream = partitions_into_k_blocks_with(n, k, limits).ok()?;
        'partitions: while let Some(labels) = stream.advance() {
            for b in 0..k {
                sums[b] = I::from_i64(0);
                sizes[b] = 0;
            }
            for (i, &b) in labels.iter().enumerate() {
                sums[b] = sums[b].add(&nums[i])?;
                sizes[b] += 1;
            }
            let mut product = I::from_i64(1);
            for b in 0..k {
                if sizes[b] < 2 {
                    continue;
                }
                let slack = den.sub(&sums[b])?;
                if !slack.is_positive() {
                    continue 'partitions;
                }
                product = product.mul(&slack.pow(sizes[b] - 1)?)?;
            }
            level = level.add(&product)?;
        }
        let weight = I::from_i64(factorial_i64(k - 3)?).mul(&den_power)?;
        let term = level.mul(&weight)?;
        total = if k % 2 == 1 {
            total.add(&term)?
        } else {
            total.sub(&term)?
        };
        den_power = den_power.mul(den)?;
    }
    Some(total.into_bigint())
}

fn factorial_i64(k: usize) -> Option<i64> {
    (1..=k as i64).try_fold(1i64, |acc, i| acc.checked_mul(i))
}

/// Closed form for four Calabi-Yau weights,
/// `2 pi (1 - sum over pairs of max(0, 1 - d_i - d_j))`.
pub fn mcmullen_four_point(w: &WeightVector) -> Result<VolumeValue> {
    if w.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: w.len(),
        });
    }
    is_calabi_yau(w)?;
    let mut clamps = Rational::zero();
    for i in 1..=4 {
        for j in i + 1..=4 {
            clamps += block_factor(w, &[i, j]);
        }
    }
    let two = Rational::from_integer(BigInt::from(2));
    Ok(VolumeValue::new(two * (Rational::one() - clamps), 1))
}

/// Direct rational evaluation of the partition sum, without rescaling.
pub fn mcmullen_volume_direct(w: &WeightVector, limits: &Limits) -> Result<VolumeValue> {
    is_calabi_yau(w)?;
    let n = w.len();
    let mut sum = Rational::zero();
    for k in 3..=n {
        let mut level = Rational::zero();
        for p in partitions_into_k_blocks_with(n, k, limits)? {
            let product: Rational = p.blocks().iter().map(|b| block_factor(w, b)).product();
            level += product;
        }
        let signed = Rational::from_integer(factorial(k - 3)) * level;
        if k % 2 == 1 {
            sum += signed;
        } else {
            sum -= signed;
        }
    }
    let c = c_constant(n as i64 - 3)?;
    Ok(VolumeValue::new(c.coefficient * sum, c.pi_power))
}
