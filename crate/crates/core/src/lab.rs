//! Verification harness: randomized cross-formula trials, continuity probes
//! toward the Calabi-Yau point, the four-point chamber identity and the
//! Donaldson-Futaki reconstruction of the localization sum.

use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::IndexSubset;
use crate::error::{Error, Result};
use crate::localization::{
    df_invariant, localization_prefactor, localization_volume_with, moment_value,
};
use crate::mcmullen::mcmullen_volume_with;
use crate::rational::{int, Rational};
use crate::volume::VolumeValue;
use crate::weights::{is_calabi_yau, random_cy_weights_from, validate_weights, WeightVector};
use crate::Limits;

/// Number of random trials at one value of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialPlan {
    pub n: usize,
    pub trials: usize,
}

/// 10000 trials for `n = 4..=7` and 1000 for `n = 8, 9`.
pub fn default_plan() -> Vec<TrialPlan> {
    (4..=9)
        .map(|n| TrialPlan {
            n,
            trials: if n <= 7 { 10_000 } else { 1_000 },
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anomaly {
    pub n: usize,
    pub trial: usize,
    pub weights: WeightVector,
    pub mcmullen: VolumeValue,
    pub localization: VolumeValue,
}

#[derive(Debug, Clone)]
pub struct AnomalyReport {
    pub seed: u64,
    pub plan: Vec<TrialPlan>,
    pub trials: usize,
    pub anomalies: Vec<Anomaly>,
    pub elapsed: Duration,
}

impl AnomalyReport {
    pub fn is_clean(&self) -> bool {
        self.anomalies.is_empty()
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed for one trial; depends only on the run seed, `n` and the trial index.
pub fn trial_seed(seed: u64, n: usize, trial: usize) -> u64 {
    splitmix64(seed ^ splitmix64(((n as u64) << 40) ^ trial as u64))
}

/// Random Calabi-Yau weights for the given trial.
pub fn trial_weights(seed: u64, n: usize, trial: usize) -> Result<WeightVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, n, trial));
    random_cy_weights_from(n, &mut rng)
}

pub fn anomaly_test(n_values: &[usize], trials_per_n: usize, seed: u64) -> Result<AnomalyReport> {
    let plan: Vec<TrialPlan> = n_values
        .iter()
        .map(|&n| TrialPlan {
            n,
            trials: trials_per_n,
        })
        .collect();
    anomaly_test_plan(&plan, seed, None)
}

/// Runs the plan on up to `jobs` threads (all cores when `None`).
pub fn anomaly_test_plan(
    plan: &[TrialPlan],
    seed: u64,
    jobs: Option<usize>,
) -> Result<AnomalyReport> {
    let limits = Limits::default();
    anomaly_test_with(
        plan,
        seed,
        jobs,
        &limits,
        |w| mcmullen_volume_with(w, &limits),
        |w| localization_volume_with(w, &limits),
    )
}

/// Trial loop with the two engines supplied by the caller.
pub fn anomaly_test_with<A, B>(
    plan: &[TrialPlan],
    seed: u64,
    jobs: Option<usize>,
    limits: &Limits,
    first: A,
    second: B,
) -> Result<AnomalyReport>
where
    A: Fn(&WeightVector) -> Result<VolumeValue> + Sync,
    B: Fn(&WeightVector) -> Result<VolumeValue> + Sync,
{
    for step in plan {
        if step.n < 4 {
            return Err(Error::InvalidArgs(format!(
                "trials need n >= 4, got {}",
                step.n
            )));
        }
        if step.n > limits.partition_cap {
            return Err(Error::UnsupportedSize {
                n: step.n,
                cap: limits.partition_cap,
            });
        }
    }
    let start = Instant::now();
    let run = || -> Result<Vec<Anomaly>> {
        let mut anomalies = Vec::new();
        for step in plan {
            let found: Vec<Option<Anomaly>> = (0..step.trials)
                .into_par_iter()
                .map(|trial| -> Result<Option<Anomaly>> {
                    let weights = trial_weights(seed, step.n, trial)?;
                    let mcmullen = first(&weights)?;
                    let localization = second(&weights)?;
                    Ok((mcmullen != localization).then_some(Anomaly {
                        n: step.n,
                        trial,
                        weights,
                        mcmullen,
                        localization,
                    }))
                })
                .collect::<Result<_>>()?;
            anomalies.extend(found.into_iter().flatten());
        }
        Ok(anomalies)
    };
    let anomalies = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidArgs(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    Ok(AnomalyReport {
        seed,
        plan: plan.to_vec(),
        trials: plan.iter().map(|s| s.trials).sum(),
        anomalies,
        elapsed: start.elapsed(),
    })
}

/// Path taken away from a Calabi-Yau point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Direction {
    /// `w(eps) = (1 - eps/2) w*`, so the total drops to `2 - eps`.
    UniformScaling,
    /// `w(eps) = w* + eps v`.
    Vector(Vec<Rational>),
}

impl Direction {
    pub fn describe(&self) -> String {
        match self {
            Direction::UniformScaling => "uniform-scaling".to_string(),
            Direction::Vector(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("vector({})", parts.join(","))
            }
        }
    }

    fn point(&self, base: &WeightVector, epsilon: &Rational) -> Result<WeightVector> {
        match self {
            Direction::UniformScaling => base.scaled(&(int(1) - epsilon / int(2))),
            Direction::Vector(v) => {
                if v.len() != base.len() {
                    return Err(Error::DimensionMismatch {
                        expected: base.len(),
                        found: v.len(),
                    });
                }
                validate_weights(
                    base.as_slice()
                        .iter()
                        .zip(v)
                        .map(|(d, dv)| d + epsilon * dv)
                        .collect(),
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityRow {
    pub epsilon: Rational,
    pub coefficient: Rational,
    pub deviation: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityTable {
    pub base: WeightVector,
    pub direction: Direction,
    /// Partition-formula volume at the base point.
    pub reference: VolumeValue,
    pub rows: Vec<ContinuityRow>,
}

impl ContinuityTable {
    /// Rows sorted by decreasing epsilon, ignoring `epsilon = 0`.
    fn positive_rows(&self) -> Vec<&ContinuityRow> {
        let mut rows: Vec<&ContinuityRow> = self
            .rows
            .iter()
            .filter(|r| r.epsilon.is_positive())
            .collect();
        rows.sort_by(|a, b| b.epsilon.cmp(&a.epsilon));
        rows
    }

    /// `deviation / epsilon` at the largest epsilon.
    pub fn largest_row_slope(&self) -> Option<Rational> {
        self.positive_rows()
            .first()
            .map(|r| &r.deviation / &r.epsilon)
    }

    /// Slope bound `K` from the two largest-epsilon rows.
    ///
    /// Fits `deviation / epsilon = a + b epsilon` through both rows and takes
    /// `max(a, slope at the largest row)`, which bounds the ratio over
    /// `(0, eps_max]` whenever the deviation is at most quadratic in epsilon.
    pub fn slope_bound(&self) -> Option<Rational> {
        let rows = self.positive_rows();
        let first = rows.first()?;
        let r1 = &first.deviation / &first.epsilon;
        let Some(second) = rows.get(1) else {
            return Some(r1);
        };
        let r2 = &second.deviation / &second.epsilon;
        let b = (&r1 - &r2) / (&first.epsilon - &second.epsilon);
        let a = &r1 - b * &first.epsilon;
        Some(if a > r1 { a } else { r1 })
    }

    /// Every row satisfies `deviation <= k * epsilon`.
    pub fn bounded_by(&self, k: &Rational) -> bool {
        self.rows.iter().all(|r| r.deviation <= k * &r.epsilon)
    }

    /// Deviations never grow as epsilon shrinks.
    pub fn deviations_monotone(&self) -> bool {
        let rows = self.positive_rows();
        rows.windows(2).all(|p| p[1].deviation <= p[0].deviation)
    }
}

pub fn continuity_probe(w_star: &WeightVector, epsilons: &[Rational]) -> Result<ContinuityTable> {
    continuity_probe_along(w_star, &Direction::UniformScaling, epsilons)
}

/// Localization volume along a path leaving the Calabi-Yau point `w_star`,
/// compared with the partition-formula volume at `w_star`.
pub fn continuity_probe_along(
    w_star: &WeightVector,
    direction: &Direction,
    epsilons: &[Rational],
) -> Result<ContinuityTable> {
    is_calabi_yau(w_star)?;
    let limits = Limits::default();
    let reference = mcmullen_volume_with(w_star, &limits)?;
    let rows = epsilons
        .iter()
        .map(|eps| {
            if eps.is_negative() || *eps >= int(1) {
                return Err(Error::InvalidArgs(format!("epsilon {eps} outside [0, 1)")));
            }
            let point = direction.point(w_star, eps)?;
            let value = localization_volume_with(&point, &limits)?;
            let deviation = (&value.coefficient - &reference.coefficient).abs();
            Ok(ContinuityRow {
                epsilon: eps.clone(),
                coefficient: value.coefficient,
                deviation,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ContinuityTable {
        base: w_star.clone(),
        direction: direction.clone(),
        reference,
        rows,
    })
}

/// Index `m` such that exactly the three pairs containing `m` have positive
/// moment. `Err(ChamberMismatch)` when no index qualifies.
pub fn four_point_chamber_index(w: &WeightVector) -> Result<usize> {
    if w.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: w.len(),
        });
    }
    let pairs: Vec<(usize, usize, Rational)> = (1..=4)
        .flat_map(|i| (i + 1..=4).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mu = moment_value(w, &IndexSubset::new(vec![i, j]).expect("distinct"));
            (i, j, mu)
        })
        .collect();
    (1..=4)
        .find(|&m| {
            pairs.iter().all(|(i, j, mu)| {
                if *i == m || *j == m {
                    mu.is_positive()
                } else {
                    mu.is_negative()
                }
            })
        })
        .ok_or_else(|| {
            Error::ChamberMismatch(format!(
                "no index has exactly its three pairs with positive moment in {w}"
            ))
        })
}

/// In the chamber where only the pairs through the lightest point have
/// positive moment, the volume is `4 pi d_min` for any total up to 2.
pub fn propordine_check(w: &WeightVector) -> Result<bool> {
    let m = four_point_chamber_index(w)?;
    let total = w.total();
    if total > int(2) {
        return Err(Error::GeneralTypeUnsupported(total));
    }
    let volume = localization_volume_with(w, &Limits::default())?;
    Ok(volume == VolumeValue::new(int(4) * w.weight(m), 1))
}

/// Rebuilds the volume from Donaldson-Futaki invariants of every fixed point
/// and compares with the localization engine.
pub fn df_sum_check(w: &WeightVector) -> Result<bool> {
    let limits = Limits::default();
    let volume = localization_volume_with(w, &limits)?;
    let n = w.len();
    let mut sum = Rational::zero();
    for mask in 0u64..(1u64 << n) {
        let flipped = IndexSubset::from_mask(mask);
        let df = df_invariant(w, &flipped);
        if !df.is_positive() {
            continue;
        }
        let term = num_traits::pow(df, n - 3);
        if flipped.len().is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let prefactor = localization_prefactor(n);
    Ok(VolumeValue::new(prefactor.coefficient * sum, prefactor.pi_power) == volume)
}

/// Four weights `a_i / 60` inside the chamber of [`propordine_check`] with
/// total at most 2, by rejection.
pub fn random_chamber_weights<R: Rng>(rng: &mut R) -> WeightVector {
    loop {
        let raw: Vec<Rational> = (0..4)
            .map(|_| Rational::new(rng.gen_range(1..60).into(), 60.into()))
            .collect();
        let Ok(w) = validate_weights(raw) else {
            continue;
        };
        if w.total() <= int(2) && four_point_chamber_index(&w).is_ok() {
            return w;
        }
    }
}

/// `m` weights `a_i / 97` in `(0, 1)` with total below `dim + 1`, by rejection.
pub fn random_fano_arrangement<R: Rng>(dim: usize, m: usize, rng: &mut R) -> Vec<Rational> {
    loop {
        let raw: Vec<Rational> = (0..m)
            .map(|_| Rational::new(rng.gen_range(1..97).into(), 97.into()))
            .collect();
        let total: Rational = raw.iter().sum();
        if total < int(dim as i64 + 1) {
            return raw;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn w(v: &[(i64, i64)]) -> WeightVector {
        WeightVector::new(v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    #[test]
    fn small_anomaly_run_is_clean_and_deterministic() {
        let a = anomaly_test(&[4, 5, 6], 200, 7).unwrap();
        assert!(a.is_clean());
        assert_eq!(a.trials, 600);
        let b = anomaly_test_plan(&a.plan, 7, Some(1)).unwrap();
        assert_eq!(a.anomalies, b.anomalies);
    }

    #[test]
    fn injected_fault_is_recorded() {
        let limits = Limits::default();
        let plan = [TrialPlan { n: 5, trials: 50 }];
        let report = anomaly_test_with(
            &plan,
            3,
            Some(2),
            &limits,
            |w| mcmullen_volume_with(w, &limits),
            |w| {
                let mut v = localization_volume_with(w, &limits)?;
                if *w == trial_weights(3, 5, 17)? {
                    v.coefficient += rat(1, 1000);
                }
                Ok(v)
            },
        )
        .unwrap();
        assert_eq!(report.anomalies.len(), 1);
        let anomaly = &report.anomalies[0];
        assert_eq!(anomaly.trial, 17);
        assert_eq!(
            &anomaly.localization.coefficient - &anomaly.mcmullen.coefficient,
            rat(1, 1000)
        );
    }

    #[test]
    fn plan_validation() {
        assert!(matches!(
            anomaly_test(&[3], 1, 0),
            Err(Error::InvalidArgs(_))
        ));
        assert_eq!(
            anomaly_test(&[13], 1, 0).err(),
            Some(Error::UnsupportedSize { n: 13, cap: 12 })
        );
    }

    #[test]
    fn continuity_symmetric_point() {
        let eps = [rat(1, 10), rat(1, 100), int(0)];
        let table = continuity_probe(&w(&[(1, 2); 4]), &eps).unwrap();
        assert_eq!(table.reference, VolumeValue::new(int(2), 1));
        assert_eq!(table.rows[0].coefficient, rat(19, 10));
        assert_eq!(table.rows[0].deviation, rat(1, 10));
        assert_eq!(table.rows[2].deviation, int(0));
        assert_eq!(table.slope_bound(), Some(int(1)));
        assert!(table.deviations_monotone());
    }

    #[test]
    fn continuity_chamber_path_is_flat() {
        let base = w(&[(1, 4), (7, 12), (7, 12), (7, 12)]);
        let dir = Direction::Vector(vec![int(0), rat(-1, 3), rat(-1, 3), rat(-1, 3)]);
        let eps = [rat(1, 10), rat(1, 100), rat(1, 1000)];
        let table = continuity_probe_along(&base, &dir, &eps).unwrap();
        assert!(table.rows.iter().all(|r| r.deviation.is_zero()));
        // uniform scaling also shrinks the lightest weight, so the volume moves
        let scaled = continuity_probe(&base, &eps).unwrap();
        assert_eq!(scaled.rows[0].deviation, rat(1, 20));
    }

    #[test]
    fn continuity_rejects_bad_input() {
        assert!(matches!(
            continuity_probe(&w(&[(1, 4); 4]), &[rat(1, 10)]),
            Err(Error::NotCalabiYau(_))
        ));
        assert!(matches!(
            continuity_probe(&w(&[(1, 2); 4]), &[int(1)]),
            Err(Error::InvalidArgs(_))
        ));
    }

    #[test]
    fn propordine_examples() {
        assert!(propordine_check(&w(&[(3, 10), (11, 20), (11, 20), (3, 5)])).unwrap());
        assert!(propordine_check(&w(&[(1, 5), (1, 2), (1, 2), (1, 2)])).unwrap());
        assert!(matches!(
            propordine_check(&w(&[(1, 4); 4])),
            Err(Error::ChamberMismatch(_))
        ));
        assert!(matches!(
            propordine_check(&w(&[(1, 2); 5])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn df_sums() {
        assert!(df_sum_check(&w(&[(1, 2); 4])).unwrap());
        assert!(df_sum_check(&w(&[(2, 5); 5])).unwrap());
        assert!(df_sum_check(&w(&[(2, 3); 3])).unwrap());
    }

    #[test]
    fn trial_seeds_differ() {
        assert_ne!(trial_seed(1, 4, 0), trial_seed(1, 4, 1));
        assert_ne!(trial_seed(1, 4, 0), trial_seed(1, 5, 0));
        assert_ne!(trial_seed(1, 4, 0), trial_seed(2, 4, 0));
    }
}
