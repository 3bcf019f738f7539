use thiserror::Error;

use crate::rational::Rational;

/// Errors raised by the volume engines and their supporting modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("at least 3 weights are required, got {0}")]
    DimensionTooSmall(usize),

    #[error("weight d{index} = {value} is not strictly between 0 and 1")]
    WeightOutOfRange { index: usize, value: Rational },

    #[error("cannot parse {0:?} as an exact rational")]
    NonRational(String),

    #[error("size {n} exceeds the configured cap of {cap}")]
    UnsupportedSize { n: usize, cap: usize },

    #[error("invalid arguments: {0}")]
    InvalidArgs(String),

    #[error("expected {expected} weights, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("weights sum to {0}, not 2")]
    NotCalabiYau(Rational),

    #[error("the GIT quotient is empty: some weight is at least half the total")]
    EmptyQuotient,

    #[error("weights sum to {0} > 2; the localization formula covers the Fano and Calabi-Yau range only")]
    GeneralTypeUnsupported(Rational),

    #[error("weights sum to {sum}, which is not below {bound}")]
    NotLogFano { sum: Rational, bound: usize },

    #[error("polarization {0} is not supported by this operation")]
    UnsupportedPolarization(&'static str),

    #[error("weights are outside the four-point chamber: {0}")]
    ChamberMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
