//! JSON reports. Every report parses back into the same type.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use isoslope::bc::{AtomRecord, ExactSequence, SlopeLayer};
use isoslope::document::{basis_literals, ScalarLiteral};
use isoslope::{
    BcInvariants, DmEntry, FilteredHn, Ledger, LedgerVerdict, NewtonPolygon, Subspace, VerdictMode,
};

pub fn fraction(q: Rational64) -> String {
    q.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub slope: String,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonReport {
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

impl From<&NewtonPolygon> for PolygonReport {
    fn from(np: &NewtonPolygon) -> Self {
        PolygonReport {
            vertices: np.vertices.clone(),
            segments: np
                .slopes
                .iter()
                .map(|&(s, length)| Segment {
                    slope: fraction(s),
                    length,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceReport {
    pub dim: usize,
    pub basis: Vec<Vec<ScalarLiteral>>,
}

impl From<&Subspace> for SubspaceReport {
    fn from(u: &Subspace) -> Self {
        SubspaceReport {
            dim: u.dim(),
            basis: basis_literals(u),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopesReport {
    pub command: String,
    pub p: u64,
    pub f: usize,
    pub precision: u32,
    pub rank: usize,
    pub newton_number: i64,
    pub slopes: Vec<String>,
    pub dm_type: Vec<DmEntry>,
    pub effective: bool,
    pub newton_polygon: PolygonReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub subspace: SubspaceReport,
    pub hodge_number: i64,
    pub newton_number: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakadmReport {
    pub command: String,
    pub weakly_admissible: bool,
    pub mode: VerdictMode,
    pub hodge_number: i64,
    pub newton_number: i64,
    pub checked_count: usize,
    pub witness: Option<WitnessReport>,
    pub hodge_polygon: PolygonReport,
    pub newton_polygon: PolygonReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedReport {
    pub rank: usize,
    pub degree: i64,
    pub slope: String,
    pub hodge_number: i64,
    pub newton_number: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnStepReport {
    /// F_i, cumulative.
    pub subspace: SubspaceReport,
    /// F_i / F_(i-1).
    pub graded: GradedReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnReport {
    pub command: String,
    pub rank: usize,
    pub degree: i64,
    pub slope: String,
    pub semistable: bool,
    pub slopes: Vec<String>,
    pub steps: Vec<HnStepReport>,
}

impl HnReport {
    pub fn new(rank: usize, degree: i64, hn: &FilteredHn) -> Self {
        HnReport {
            command: "hn".into(),
            rank,
            degree,
            slope: fraction(Rational64::new(degree, rank as i64)),
            semistable: hn.steps.len() == 1,
            slopes: hn.slopes().into_iter().map(fraction).collect(),
            steps: hn
                .steps
                .iter()
                .map(|s| HnStepReport {
                    subspace: (&s.subspace).into(),
                    graded: GradedReport {
                        rank: s.rank,
                        degree: s.degree,
                        slope: fraction(s.slope),
                        hodge_number: s.hodge_number,
                        newton_number: s.newton_number,
                    },
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerStepReport {
    pub label: String,
    pub sequence: Option<ExactSequence>,
    pub balanced: Option<bool>,
    pub deduction: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LedgerVerdictReport {
    Admissible { coker_dim: i64, v_dim: i64 },
    NotWeaklyAdmissible { witness: WitnessReport },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub mode: VerdictMode,
    pub balanced: bool,
    pub steps: Vec<LedgerStepReport>,
    pub verdict: LedgerVerdictReport,
}

impl From<&Ledger> for LedgerReport {
    fn from(l: &Ledger) -> Self {
        LedgerReport {
            mode: l.mode,
            balanced: l.is_balanced(),
            steps: l
                .steps
                .iter()
                .map(|s| LedgerStepReport {
                    label: s.label.clone(),
                    sequence: s.sequence.clone(),
                    balanced: s.sequence.as_ref().map(|q| q.is_balanced()),
                    deduction: s.deduction.clone(),
                })
                .collect(),
            verdict: match &l.verdict {
                LedgerVerdict::Admissible { coker_dim, v_dim } => LedgerVerdictReport::Admissible {
                    coker_dim: *coker_dim,
                    v_dim: *v_dim,
                },
                LedgerVerdict::NotWeaklyAdmissible {
                    witness,
                    hodge_number,
                    newton_number,
                } => LedgerVerdictReport::NotWeaklyAdmissible {
                    witness: WitnessReport {
                        subspace: witness.into(),
                        hodge_number: *hodge_number,
                        newton_number: *newton_number,
                    },
                },
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerReport {
    pub slope: String,
    pub multiplicity: Option<usize>,
    pub atoms: Vec<AtomRecord>,
    pub invariants: BcInvariants,
}

impl From<&SlopeLayer> for LayerReport {
    fn from(l: &SlopeLayer) -> Self {
        LayerReport {
            slope: l.slope.to_string(),
            multiplicity: l.multiplicity,
            atoms: l.atoms.to_records(),
            invariants: l.atoms.invariants(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcReport {
    pub command: String,
    pub e: BcInvariants,
    pub m: BcInvariants,
    pub decomposition: String,
    pub atoms: Vec<AtomRecord>,
    pub ledger: LedgerReport,
    pub slope_filtration: Vec<LayerReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}
