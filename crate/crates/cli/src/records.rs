//! Serialized forms. Field order in each struct is the output order.

use moduli_volume::cm_degree::CMDegreeReport;
use moduli_volume::lab::{Anomaly, AnomalyReport, ContinuityTable};
use moduli_volume::rational::format_rational;
use moduli_volume::{GeometryClass, Rational, VolumeValue, WallReport, WeightVector};
use serde::{Deserialize, Serialize};

pub const APPROX_DIGITS: usize = 20;

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeRecord {
    pub n: usize,
    pub weights: Vec<String>,
    pub geometry: GeometryClass,
    pub formula: String,
    pub coefficient: String,
    pub pi_power: u32,
    pub on_wall: bool,
    pub approx: String,
}

impl VolumeRecord {
    pub fn new(w: &WeightVector, formula: &str, value: &VolumeValue, on_wall: bool) -> Self {
        VolumeRecord {
            n: w.len(),
            weights: strings(w.as_slice()),
            geometry: moduli_volume::classify_geometry(w),
            formula: formula.to_string(),
            coefficient: format_rational(&value.coefficient),
            pi_power: value.pi_power,
            on_wall,
            approx: value.approx(APPROX_DIGITS),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactVolume {
    pub coefficient: String,
    pub pi_power: u32,
}

impl From<&VolumeValue> for ExactVolume {
    fn from(v: &VolumeValue) -> Self {
        ExactVolume {
            coefficient: format_rational(&v.coefficient),
            pi_power: v.pi_power,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassifyRecord {
    pub n: usize,
    pub weights: Vec<String>,
    pub total: String,
    pub geometry: GeometryClass,
    pub git_nonempty: bool,
    pub on_wall: bool,
    pub hassett_walls: Vec<Vec<usize>>,
    pub localization_walls: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hassett_case: Option<String>,
}

impl ClassifyRecord {
    pub fn new(w: &WeightVector, walls: &WallReport, hassett_case: Option<String>) -> Self {
        let lists = |v: &[moduli_volume::IndexSubset]| -> Vec<Vec<usize>> {
            v.iter().map(|s| s.indices().to_vec()).collect()
        };
        ClassifyRecord {
            n: w.len(),
            weights: strings(w.as_slice()),
            total: format_rational(&w.total()),
            geometry: moduli_volume::classify_geometry(w),
            git_nonempty: moduli_volume::git_nonempty(w),
            on_wall: walls.on_wall,
            hassett_walls: lists(&walls.hassett_walls),
            localization_walls: lists(&walls.localization_walls),
            hassett_case,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DegreeRecord {
    pub index: usize,
    pub degree: String,
}

#[derive(Debug, Serialize)]
pub struct CMDegreeRecord {
    pub polarization: String,
    pub dim: usize,
    pub weights: Vec<String>,
    pub geometry: GeometryClass,
    pub fiber_volume: Option<String>,
    pub degrees: Vec<DegreeRecord>,
}

impl CMDegreeRecord {
    pub fn new(report: &CMDegreeReport, weights: &[Rational]) -> Self {
        CMDegreeRecord {
            polarization: report.polarization.as_str().to_string(),
            dim: report.dim,
            weights: strings(weights),
            geometry: report.geometry,
            fiber_volume: report.fiber_volume.as_ref().map(format_rational),
            degrees: report
                .degrees
                .iter()
                .map(|d| DegreeRecord {
                    index: d.index,
                    degree: format_rational(&d.degree),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PlanRecord {
    pub n: usize,
    pub trials: usize,
}

#[derive(Debug, Serialize)]
pub struct AnomalyRecord {
    pub n: usize,
    pub trial: usize,
    pub weights: Vec<String>,
    pub mcmullen: ExactVolume,
    pub localization: ExactVolume,
}

impl From<&Anomaly> for AnomalyRecord {
    fn from(a: &Anomaly) -> Self {
        AnomalyRecord {
            n: a.n,
            trial: a.trial,
            weights: strings(a.weights.as_slice()),
            mcmullen: (&a.mcmullen).into(),
            localization: (&a.localization).into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnomalyReportRecord {
    pub seed: u64,
    pub plan: Vec<PlanRecord>,
    pub trials: usize,
    pub anomaly_count: usize,
    pub anomalies: Vec<AnomalyRecord>,
}

impl From<&AnomalyReport> for AnomalyReportRecord {
    fn from(r: &AnomalyReport) -> Self {
        AnomalyReportRecord {
            seed: r.seed,
            plan: r
                .plan
                .iter()
                .map(|p| PlanRecord {
                    n: p.n,
                    trials: p.trials,
                })
                .collect(),
            trials: r.trials,
            anomaly_count: r.anomalies.len(),
            anomalies: r.anomalies.iter().map(AnomalyRecord::from).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ContinuityRowRecord {
    pub epsilon: String,
    pub coefficient: String,
    pub deviation: String,
}

#[derive(Debug, Serialize)]
pub struct ContinuityRecord {
    pub base: Vec<String>,
    pub direction: String,
    pub reference: ExactVolume,
    pub slope_bound: Option<String>,
    pub rows: Vec<ContinuityRowRecord>,
}

impl From<&ContinuityTable> for ContinuityRecord {
    fn from(t: &ContinuityTable) -> Self {
        ContinuityRecord {
            base: strings(t.base.as_slice()),
            direction: t.direction.describe(),
            reference: (&t.reference).into(),
            slope_bound: t.slope_bound().as_ref().map(format_rational),
            rows: t
                .rows
                .iter()
                .map(|r| ContinuityRowRecord {
                    epsilon: format_rational(&r.epsilon),
                    coefficient: format_rational(&r.coefficient),
                    deviation: format_rational(&r.deviation),
                })
                .collect(),
        }
    }
}
