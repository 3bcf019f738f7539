//! Exact volumes of moduli spaces of weighted points on the projective line.
//!
//! Two independent routes compute the volume:
//!
//! - [`mcmullen`]: a sum over set partitions, valid when the weights sum to 2;
//! - [`localization`]: a sum over torus fixed points, valid for weight totals
//!   up to 2, whose terms are Donaldson-Futaki invariants.
//!
//! They agree exactly on every Calabi-Yau weight vector, and the second
//! converges to the first as the total rises to 2. [`cm_degree`] gives the
//! CM line-bundle degrees of the related test families, and [`lab`] holds
//! the randomized cross-checks. Everything is exact rational arithmetic;
//! volumes are reported as `q * pi^k`.

pub mod cm_degree;
pub mod combinatorics;
pub mod error;
pub mod lab;
pub mod localization;
pub mod mcmullen;
pub mod rational;
pub mod volume;
pub mod weights;

pub use cm_degree::{
    cm_degree_fano, cm_degree_general_type, cm_multidegree, fiber_volume, CMDegreeReport,
    Polarization,
};
pub use combinatorics::{
    bell, partitions_into_k_blocks, partitions_with_at_least, stirling2, subsets_of_size,
    IndexSubset, SetPartition,
};
pub use error::{Error, Result};
pub use lab::{
    anomaly_test, continuity_probe, df_sum_check, propordine_check, AnomalyReport, ContinuityTable,
};
pub use localization::{
    cy_reduced_volume, df_invariant, localization_breakdown, localization_volume, moment_value,
    positive_fixed_points, FixedPoint, TermBreakdown,
};
pub use mcmullen::{block_factor, mcmullen_four_point, mcmullen_volume};
pub use rational::{parse_rational, Rational};
pub use volume::{c_constant, VolumeValue};
pub use weights::{
    classify_geometry, git_nonempty, hassett_case, random_cy_weights, validate_weights,
    wall_report, GeometryClass, HassettCase, WallReport, WeightVector,
};

/// Size caps protecting desk-scale runtimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for partition enumeration (Bell-number cost).
    pub partition_cap: usize,
    /// Largest `n` for sweeps over all `2^n` subsets.
    pub subset_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            partition_cap: 12,
            subset_cap: 30,
        }
    }
}
