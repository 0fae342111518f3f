//! Output records. Every number here is copied from a core result.

use serde::{Deserialize, Serialize};
use torricelli_core::{
    BalanceReport, Case, DirectionSums, SolverOutcome, SphereOutcome, TangentVector, Warning,
};

use crate::config::FORMAT_VERSION;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub version: String,
    pub input_digest: String,
    pub outcome: OutcomeRecord,
    /// Certificates at a floating minimizer; `None` when absorbed.
    pub balance: Option<BalanceRecord>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeRecord {
    /// `"euclidean"` or `"sphere"`.
    pub geometry: String,
    pub minimizer: Vec<f64>,
    /// `"floating"` or `"absorbed"`.
    pub case: String,
    pub index: Option<usize>,
    pub residual_norm: f64,
    pub objective_value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalanceRecord {
    pub point: Vec<f64>,
    pub residual: Vec<f64>,
    pub residual_norm: f64,
    pub tolerance: f64,
    pub total_weight: f64,
    pub probe_delta: Option<f64>,
    pub canonical_frame: Option<[usize; 2]>,
    pub per_direction: Vec<DirectionRecord>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectionRecord {
    pub index: usize,
    pub cos_sum: f64,
    pub sin_sum: Option<f64>,
    pub frame_partner: Option<usize>,
    pub triple: Option<[f64; 3]>,
    pub virtual_work: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyReport {
    pub input_digest: String,
    pub rows: Vec<ClassifyRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyRow {
    pub index: usize,
    pub weight: f64,
    /// Weight tested against the pull: the anchor's own, or the summed weight
    /// of every anchor sharing its position.
    pub effective_weight: f64,
    pub vertex_pull: Option<f64>,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCompareReport {
    pub input_digest: String,
    pub solver: SolverSide,
    pub oracle: OracleSide,
    pub distance: f64,
    pub threshold: f64,
    pub agreed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSide {
    pub argmin: Vec<f64>,
    pub objective_value: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSide {
    pub argmin: Vec<f64>,
    pub objective_value: f64,
    pub resolution: f64,
    pub cells_evaluated: u64,
    pub level_values: Vec<f64>,
}

pub fn case_fields(case: Case) -> (String, Option<usize>) {
    match case {
        Case::Floating => ("floating".into(), None),
        Case::AbsorbedAt(i) => ("absorbed".into(), Some(i)),
    }
}

pub fn warning_strings(w: &[Warning]) -> Vec<String> {
    w.iter().map(|w| w.as_str().to_string()).collect()
}

impl OutcomeRecord {
    pub fn euclidean(o: &SolverOutcome) -> Self {
        let (case, index) = case_fields(o.case);
        OutcomeRecord {
            geometry: "euclidean".into(),
            minimizer: o.minimizer.to_vec(),
            case,
            index,
            residual_norm: o.residual_norm,
            objective_value: o.objective_value,
            iterations: o.iterations,
            converged: o.converged,
        }
    }

    pub fn sphere(o: &SphereOutcome) -> Self {
        let (case, index) = case_fields(o.case);
        OutcomeRecord {
            geometry: "sphere".into(),
            minimizer: o.minimizer.coords().to_vec(),
            case,
            index,
            residual_norm: o.residual_norm,
            objective_value: o.objective_value,
            iterations: o.iterations,
            converged: o.converged,
        }
    }
}

impl From<&DirectionSums> for DirectionRecord {
    fn from(d: &DirectionSums) -> Self {
        DirectionRecord {
            index: d.index,
            cos_sum: d.cos_sum,
            sin_sum: d.sin_sum,
            frame_partner: d.frame_partner,
            triple: d.triple,
            virtual_work: d.virtual_work,
        }
    }
}

impl From<&BalanceReport> for BalanceRecord {
    fn from(r: &BalanceReport) -> Self {
        BalanceRecord {
            point: r.point.to_vec(),
            residual: r.residual.to_vec(),
            residual_norm: r.residual_norm,
            tolerance: r.tolerance,
            total_weight: r.total_weight,
            probe_delta: Some(r.probe_delta),
            canonical_frame: r.canonical_frame.map(|(j, k)| [j, k]),
            per_direction: r.per_direction.iter().map(DirectionRecord::from).collect(),
            passed: r.passed,
        }
    }
}

impl BalanceRecord {
    /// Geodesic balance at a point of the sphere; there are no per-direction
    /// decompositions in that setting.
    pub fn sphere(residual: &TangentVector, tolerance: f64, total_weight: f64) -> Self {
        let residual_norm = residual.norm();
        BalanceRecord {
            point: residual.base().coords().to_vec(),
            residual: residual.vec().to_vec(),
            residual_norm,
            tolerance,
            total_weight,
            probe_delta: None,
            canonical_frame: None,
            per_direction: Vec::new(),
            passed: residual_norm <= tolerance * total_weight,
        }
    }
}

impl ReportFile {
    pub fn new(
        input_digest: String,
        outcome: OutcomeRecord,
        balance: Option<BalanceRecord>,
        warnings: Vec<String>,
    ) -> Self {
        ReportFile {
            version: FORMAT_VERSION.into(),
            input_digest,
            outcome,
            balance,
            warnings,
        }
    }
}

/// Pretty JSON with a trailing newline. Floats use the shortest
/// representation that parses back to the same bits.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}
