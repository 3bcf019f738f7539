//! Degrees of the log CM line bundle on families of weighted hyperplane
//! arrangements in `P^n` over a `P^1` base.
//!
//! The family carries `m` weighted hyperplanes, one of which moves along the
//! diagonal. Degrees are reported without any factor of pi.

use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::weights::{check_open_unit, GeometryClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    /// `L = -K - D`
    #[serde(rename = "anti-minus-div")]
    AnticanonicalMinusDivisor,
    /// `L = -K`
    #[serde(rename = "anti")]
    Anticanonical,
    /// `L = K + D`
    #[serde(rename = "log-canonical")]
    LogCanonical,
}

impl Polarization {
    pub const ALL: [Polarization; 3] = [
        Polarization::AnticanonicalMinusDivisor,
        Polarization::Anticanonical,
        Polarization::LogCanonical,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Polarization::AnticanonicalMinusDivisor => "anti-minus-div",
            Polarization::Anticanonical => "anti",
            Polarization::LogCanonical => "log-canonical",
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Polarization::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::InvalidArgs(format!("unknown polarization {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedDegree {
    /// 1-based hyperplane index.
    pub index: usize,
    pub degree: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMDegreeReport {
    pub polarization: Polarization,
    pub dim: usize,
    pub degrees: Vec<IndexedDegree>,
    /// `(n + 1 - sum d)^n`; absent when the weights are not log Fano.
    pub fiber_volume: Option<Rational>,
    /// Position of `sum d` relative to the Calabi-Yau value `n + 1`.
    pub geometry: GeometryClass,
}

fn check_weights(dim: usize, weights: &[Rational]) -> Result<Rational> {
    if dim == 0 {
        return Err(Error::InvalidArgs("dimension must be at least 1".into()));
    }
    if weights.is_empty() {
        return Err(Error::InvalidArgs("no weights given".into()));
    }
    check_open_unit(weights)?;
    Ok(weights.iter().sum())
}

fn bound(dim: usize) -> Rational {
    int(dim as i64 + 1)
}

pub fn arrangement_geometry(dim: usize, weights: &[Rational]) -> Result<GeometryClass> {
    let total = check_weights(dim, weights)?;
    Ok(GeometryClass::from_total(&total, &bound(dim)))
}

/// Volume of a fiber under `-K - D`: `(n + 1 - sum d)^n`.
pub fn fiber_volume(dim: usize, weights: &[Rational]) -> Result<Rational> {
    let total = check_weights(dim, weights)?;
    let slack = bound(dim) - &total;
    if !slack.is_positive() {
        return Err(Error::NotLogFano {
            sum: total,
            bound: dim + 1,
        });
    }
    Ok(num_traits::pow(slack, dim))
}

/// Degree at the 1-based hyperplane `index` for one of the Fano polarizations.
///
/// `-K - D` gives `(n+1) d_j (n+1 - sum d)^n` and needs `sum d < n + 1`.
/// `-K` gives `(n+1)^2 d_j` and also accepts the boundary `sum d = n + 1`.
pub fn cm_degree_fano(
    dim: usize,
    weights: &[Rational],
    index: usize,
    polarization: Polarization,
) -> Result<Rational> {
    let total = check_weights(dim, weights)?;
    if index == 0 || index > weights.len() {
        return Err(Error::InvalidArgs(format!(
            "index {index} outside 1..={}",
            weights.len()
        )));
    }
    let d = &weights[index - 1];
    let np1 = bound(dim);
    match polarization {
        Polarization::AnticanonicalMinusDivisor => {
            let volume = fiber_volume(dim, weights)?;
            Ok(&np1 * d * volume)
        }
        Polarization::Anticanonical => {
            if total > np1 {
                return Err(Error::NotLogFano {
                    sum: total,
                    bound: dim + 1,
                });
            }
            Ok(&np1 * &np1 * d)
        }
        Polarization::LogCanonical => Err(Error::UnsupportedPolarization("log-canonical")),
    }
}

/// General type four-point family under `K + D`, index 4 moving:
/// `2 d_4 (sum d - 2)`.
pub fn cm_degree_general_type(weights: &[Rational]) -> Result<Rational> {
    if weights.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: weights.len(),
        });
    }
    let total = check_weights(1, weights)?;
    Ok(int(2) * &weights[3] * (total - int(2)))
}

/// Full degree report for a polarization.
///
/// For `LogCanonical` the family must be four points on the line and the
/// single reported degree belongs to the moving index 4.
pub fn cm_multidegree(
    dim: usize,
    weights: &[Rational],
    polarization: Polarization,
) -> Result<CMDegreeReport> {
    let geometry = arrangement_geometry(dim, weights)?;
    let fiber = fiber_volume(dim, weights).ok();
    let degrees = match polarization {
        Polarization::LogCanonical => {
            if dim != 1 {
                return Err(Error::InvalidArgs(
                    "the log canonical degree is available for points on the line only".into(),
                ));
            }
            vec![IndexedDegree {
                index: 4,
                degree: cm_degree_general_type(weights)?,
            }]
        }
        _ => (1..=weights.len())
            .map(|index| {
                cm_degree_fano(dim, weights, index, polarization)
                    .map(|degree| IndexedDegree { index, degree })
            })
            .collect::<Result<_>>()?,
    };
    Ok(CMDegreeReport {
        polarization,
        dim,
        degrees,
        fiber_volume: fiber,
        geometry,
    })
}

impl CMDegreeReport {
    /// Keeps only the degree at the given 1-based index.
    pub fn restrict_to(mut self, index: usize) -> Result<Self> {
        self.degrees.retain(|d| d.index == index);
        if self.degrees.is_empty() {
            return Err(Error::InvalidArgs(format!(
                "no degree reported at index {index}"
            )));
        }
        Ok(self)
    }

    /// Degree divided by `(n+1) d_j`, identical for every index under a Fano
    /// polarization.
    pub fn prequantum_multiples(&self, weights: &[Rational]) -> Vec<Rational> {
        let np1 = bound(self.dim);
        self.degrees
            .iter()
            .map(|d| &d.degree / (&np1 * &weights[d.index - 1]))
            .collect()
    }
}
