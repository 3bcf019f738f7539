//! Weight vectors, the Fano / Calabi-Yau / general type trichotomy, and the
//! walls in weight space where the volume changes polynomial piece.

use std::fmt;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::IndexSubset;
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_list, Rational};
use crate::Limits;

/// Weights `d_1..d_n` of `n >= 3` marked points, each strictly inside `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(raw: Vec<Rational>) -> Result<Self> {
        validate_weights(raw)
    }

    /// Parses a comma-separated list such as `"1/2,1/2,1/2,1/2"`.
    pub fn parse(text: &str) -> Result<Self> {
        validate_weights(parse_list(text)?)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// Weight of the 1-based index `i`.
    pub fn weight(&self, i: usize) -> &Rational {
        &self.0[i - 1]
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    /// Sum of the weights with the given 1-based indices.
    pub fn subset_sum(&self, indices: &[usize]) -> Rational {
        indices.iter().map(|&i| self.weight(i)).sum()
    }

    /// 1-based index of the smallest weight (first one on ties).
    pub fn min_index(&self) -> usize {
        let mut best = 0;
        for (i, w) in self.0.iter().enumerate() {
            if *w < self.0[best] {
                best = i;
            }
        }
        best + 1
    }

    /// Reorders the weights; `order[k]` is the 0-based source of slot `k`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: order.len(),
            });
        }
        for &i in order {
            if i >= self.len() || seen[i] {
                return Err(Error::InvalidArgs(format!(
                    "{order:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(WeightVector(
            order.iter().map(|&i| self.0[i].clone()).collect(),
        ))
    }

    /// Multiplies every weight by `factor`, revalidating the result.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        validate_weights(self.0.iter().map(|w| w * factor).collect())
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn validate_weights(raw: Vec<Rational>) -> Result<WeightVector> {
    if raw.len() < 3 {
        return Err(Error::DimensionTooSmall(raw.len()));
    }
    check_open_unit(&raw)?;
    Ok(WeightVector(raw))
}

/// Every entry strictly inside `(0, 1)`; reports the first 1-based offender.
pub(crate) fn check_open_unit(values: &[Rational]) -> Result<()> {
    for (i, d) in values.iter().enumerate() {
        if !d.is_positive() || *d >= Rational::one() {
            return Err(Error::WeightOutOfRange {
                index: i + 1,
                value: d.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeometryClass {
    LogFano,
    LogCalabiYau,
    LogGeneralType,
}

impl GeometryClass {
    /// Compares a weight total against the Calabi-Yau value.
    pub fn from_total(total: &Rational, calabi_yau: &Rational) -> Self {
        match total.cmp(calabi_yau) {
            std::cmp::Ordering::Less => GeometryClass::LogFano,
            std::cmp::Ordering::Equal => GeometryClass::LogCalabiYau,
            std::cmp::Ordering::Greater => GeometryClass::LogGeneralType,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GeometryClass::LogFano => "log-fano",
            GeometryClass::LogCalabiYau => "log-calabi-yau",
            GeometryClass::LogGeneralType => "log-general-type",
        }
    }
}

impl fmt::Display for GeometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_geometry(w: &WeightVector) -> GeometryClass {
    GeometryClass::from_total(&w.total(), &int(2))
}

pub(crate) fn is_calabi_yau(w: &WeightVector) -> Result<()> {
    let total = w.total();
    if total == int(2) {
        Ok(())
    } else {
        Err(Error::NotCalabiYau(total))
    }
}

/// Semistable configurations exist: `2 d_j < sum(d)` for every `j`.
pub fn git_nonempty(w: &WeightVector) -> bool {
    let total = w.total();
    w.as_slice().iter().all(|d| d * int(2) < total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallReport {
    /// Subsets whose weights sum to exactly 1.
    pub hassett_walls: Vec<IndexSubset>,
    /// Subsets whose weights sum to exactly half the total (moment zero).
    pub localization_walls: Vec<IndexSubset>,
    pub on_wall: bool,
}

/// Scans every proper nonempty subset for the two kinds of wall.
///
/// Subsets are listed by size, then lexicographically.
pub fn wall_report(w: &WeightVector) -> Result<WallReport> {
    wall_report_with(w, &Limits::default())
}

pub fn wall_report_with(w: &WeightVector, limits: &Limits) -> Result<WallReport> {
    let n = w.len();
    if n > limits.subset_cap {
        return Err(Error::UnsupportedSize {
            n,
            cap: limits.subset_cap,
        });
    }
    let one = Rational::one();
    let half_total = w.total() / int(2);
    let mut hassett_walls = Vec::new();
    let mut localization_walls = Vec::new();
    for k in 1..n {
        for subset in crate::combinatorics::subsets_of_size(n, k)? {
            let sum = w.subset_sum(subset.indices());
            if sum == one {
                hassett_walls.push(subset.clone());
            }
            if sum == half_total {
                localization_walls.push(subset);
            }
        }
    }
    let on_wall = !hassett_walls.is_empty() || !localization_walls.is_empty();
    Ok(WallReport {
        hassett_walls,
        localization_walls,
        on_wall,
    })
}

/// Where the moving fourth point sits relative to the three fixed ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HassettCase {
    /// The diagonal misses every fixed point; the universal family is smooth.
    NoCollision,
    /// The diagonal meets at least one fixed point and must be blown up there.
    CollisionNeedsBlowup,
    Other,
}

impl HassettCase {
    pub fn as_str(self) -> &'static str {
        match self {
            HassettCase::NoCollision => "no-collision",
            HassettCase::CollisionNeedsBlowup => "collision-needs-blowup",
            HassettCase::Other => "other",
        }
    }
}

impl fmt::Display for HassettCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Four-point stability case with index 4 as the moving point.
pub fn hassett_case(w: &WeightVector) -> Result<HassettCase> {
    if w.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: w.len(),
        });
    }
    let one = Rational::one();
    let d = w.as_slice();
    let fixed_pairs_heavy = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .all(|&(i, j)| &d[i] + &d[j] > one);
    let moving_light = d.iter().all(|dk| dk + &d[3] < one);
    if fixed_pairs_heavy && moving_light {
        return Ok(HassettCase::NoCollision);
    }
    if d[..3].iter().any(|di| di + &d[3] > one) {
        return Ok(HassettCase::CollisionNeedsBlowup);
    }
    Ok(HassettCase::Other)
}

/// Random integer draws in `1..=30`, rescaled to sum to exactly 2.
///
/// Draws with an entry `>= 1` are rejected and redrawn, so the result is
/// always a valid Calabi-Yau weight vector. Deterministic in `(n, seed)`.
pub fn random_cy_weights(n: usize, seed: u64) -> Result<WeightVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_cy_weights_from(n, &mut rng)
}

pub fn random_cy_weights_from<R: Rng>(n: usize, rng: &mut R) -> Result<WeightVector> {
    if n < 3 {
        return Err(Error::DimensionTooSmall(n));
    }
    loop {
        let draws: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=30)).collect();
        if let Some(w) = normalize_draws(&draws) {
            return Ok(w);
        }
    }
}

/// Scales positive integer draws by `2 / sum`; `None` if any entry reaches 1.
pub fn normalize_draws(draws: &[i64]) -> Option<WeightVector> {
    let total: i64 = draws.iter().sum();
    if total <= 0 || draws.len() < 3 {
        return None;
    }
    let raw: Vec<Rational> = draws
        .iter()
        .map(|&a| Rational::new((2 * a).into(), total.into()))
        .collect();
    validate_weights(raw).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn w(v: &[(i64, i64)]) -> WeightVector {
        WeightVector::new(v.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn subset(ix: &[usize]) -> IndexSubset {
        IndexSubset::new(ix.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(WeightVector::parse("1/2,1/2,1/2,1/2").is_ok());
        assert!(matches!(
            WeightVector::parse("1,1/2,1/2"),
            Err(Error::WeightOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            WeightVector::parse("1/2,0,1/2"),
            Err(Error::WeightOutOfRange { index: 2, .. })
        ));
        assert_eq!(
            WeightVector::parse("1/2,1/2"),
            Err(Error::DimensionTooSmall(2))
        );
        assert!(matches!(
            WeightVector::parse("1/2,x,1/2"),
            Err(Error::NonRational(_))
        ));
        assert_eq!(
            WeightVector::parse("0.5, 0.5, 0.5, 0.5").unwrap(),
            w(&[(1, 2); 4])
        );
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_geometry(&w(&[(1, 2); 4])),
            GeometryClass::LogCalabiYau
        );
        assert_eq!(classify_geometry(&w(&[(1, 4); 4])), GeometryClass::LogFano);
        assert_eq!(
            classify_geometry(&w(&[(9, 10), (9, 10), (9, 10), (1, 20)])),
            GeometryClass::LogGeneralType
        );
    }

    #[test]
    fn git_nonempty_examples() {
        assert!(git_nonempty(&w(&[(1, 2); 4])));
        assert!(!git_nonempty(&w(&[(9, 10), (1, 10), (1, 10), (1, 10)])));
        assert!(git_nonempty(&w(&[(1, 5), (1, 2), (1, 2), (1, 2)])));
    }

    #[test]
    fn walls_symmetric_point() {
        let report = wall_report(&w(&[(1, 2); 4])).unwrap();
        assert_eq!(report.hassett_walls.len(), 6);
        assert!(report.hassett_walls.iter().all(|s| s.len() == 2));
        assert_eq!(report.localization_walls, report.hassett_walls);
        assert!(report.on_wall);
    }

    #[test]
    fn walls_generic_point() {
        let report = wall_report(&w(&[(3, 10), (11, 20), (11, 20), (3, 5)])).unwrap();
        assert!(report.hassett_walls.is_empty());
        assert!(report.localization_walls.is_empty());
        assert!(!report.on_wall);
    }

    #[test]
    fn walls_two_pairs() {
        let report = wall_report(&w(&[(1, 3), (1, 2), (1, 2), (2, 3)])).unwrap();
        assert_eq!(report.hassett_walls, vec![subset(&[1, 4]), subset(&[2, 3])]);
        assert!(report.on_wall);
    }

    #[test]
    fn wall_cap() {
        let limits = Limits {
            subset_cap: 3,
            ..Limits::default()
        };
        assert_eq!(
            wall_report_with(&w(&[(1, 2); 4]), &limits),
            Err(Error::UnsupportedSize { n: 4, cap: 3 })
        );
    }

    #[test]
    fn hassett_cases() {
        assert_eq!(
            hassett_case(&w(&[(3, 5), (3, 5), (3, 5), (1, 5)])).unwrap(),
            HassettCase::NoCollision
        );
        assert_eq!(
            hassett_case(&w(&[(3, 5), (3, 5), (3, 5), (9, 20)])).unwrap(),
            HassettCase::CollisionNeedsBlowup
        );
        assert_eq!(hassett_case(&w(&[(1, 4); 4])).unwrap(), HassettCase::Other);
        assert!(matches!(
            hassett_case(&w(&[(1, 2); 5])),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 5
            })
        ));
    }

    #[test]
    fn draw_normalization() {
        assert_eq!(normalize_draws(&[5, 5, 5, 5]), Some(w(&[(1, 2); 4])));
        // 2 * 29 / 50 = 29/25 >= 1
        assert_eq!(normalize_draws(&[1, 29, 10, 10]), None);
        // an entry of exactly 1 is rejected as well
        assert_eq!(normalize_draws(&[2, 1, 1]), None);
    }

    #[test]
    fn random_cy_is_deterministic_and_valid() {
        for seed in 0..50 {
            let a = random_cy_weights(5, seed).unwrap();
            assert_eq!(a, random_cy_weights(5, seed).unwrap());
            assert_eq!(a.total(), int(2));
            assert_eq!(classify_geometry(&a), GeometryClass::LogCalabiYau);
        }
        assert_eq!(random_cy_weights(2, 0), Err(Error::DimensionTooSmall(2)));
    }

    #[test]
    fn permutation_and_min_index() {
        let v = w(&[(3, 10), (11, 20), (11, 20), (3, 5)]);
        let p = v.permuted(&[3, 2, 1, 0]).unwrap();
        assert_eq!(p.weight(1), &rat(3, 5));
        assert_eq!(p.min_index(), 4);
        assert!(v.permuted(&[0, 0, 1, 2]).is_err());
    }
}
