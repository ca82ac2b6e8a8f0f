//! Report documents: JSON-stable output of the CLI commands.
//!
//! Complex numbers serialize as `[re, im]`, matrices as nested row arrays,
//! rationals as `{num, den}`. Re-running a command with the same config and
//! seed produces byte-identical documents except for `timing_ms`.

use serde::{Deserialize, Serialize};
use twisted_weyl::cohomology::CohomologyResult;
use twisted_weyl::conjugacy::{ConjugacyDecision, Verdict};
use twisted_weyl::linalg::{CMat, C64};
use twisted_weyl::verify::CheckReport;

use crate::scenario::ScenarioConfig;

pub type ComplexDoc = [f64; 2];
pub type MatrixDoc = Vec<Vec<ComplexDoc>>;

pub fn matrix_doc(m: &CMat) -> MatrixDoc {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn spectrum_doc(s: &[C64]) -> Vec<ComplexDoc> {
    s.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalDoc {
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorsionPointDoc {
    pub index: usize,
    pub coords: Vec<RationalDoc>,
    pub matrix: MatrixDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub from: usize,
    pub to: usize,
    pub matrix: MatrixDoc,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassDoc {
    pub representative: TorsionPointDoc,
    pub members: Vec<usize>,
    pub witnesses: Vec<WitnessDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub pair: (usize, usize),
    pub left_spectrum: Vec<ComplexDoc>,
    pub right_spectrum: Vec<ComplexDoc>,
    pub distance: f64,
}

/// Exact classification of `H¹(ℤ, T^k)` for a lattice automorphism: the
/// quotient `T^k / im(1 - M)` described by its dimension and component
/// group divisors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ZClassificationDoc {
    pub quotient_dimension: usize,
    pub component_divisors: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct H1Report {
    pub config: ScenarioConfig,
    pub torus_rank: usize,
    pub torsion_count: usize,
    pub class_count: usize,
    pub weyl_order: usize,
    /// Every torsion point with exact coordinates and its matrix, in the
    /// canonical order; witnesses and certificates refer to these indices,
    /// so the report re-verifies without recomputing the torus.
    pub points: Vec<TorsionPointDoc>,
    pub classes: Vec<ClassDoc>,
    pub certificates: Vec<CertificateDoc>,
    pub status: String,
    pub unresolved: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_classification: Option<ZClassificationDoc>,
    pub timing_ms: u128,
    pub seed: u64,
}

pub fn h1_report(config: &ScenarioConfig, res: &CohomologyResult, timing_ms: u128) -> H1Report {
    let point_doc = |idx: usize| -> TorsionPointDoc {
        let p = &res.points[idx];
        TorsionPointDoc {
            index: idx,
            coords: p
                .coords
                .iter()
                .map(|q| RationalDoc {
                    num: *q.numer(),
                    den: *q.denom(),
                })
                .collect(),
            matrix: matrix_doc(&p.element.matrix),
        }
    };
    let classes = res
        .classes
        .iter()
        .map(|c| ClassDoc {
            representative: point_doc(c.representative),
            members: c.members.clone(),
            witnesses: c
                .witnesses
                .iter()
                .map(|(from, to, g, r)| WitnessDoc {
                    from: *from,
                    to: *to,
                    matrix: matrix_doc(&g.matrix),
                    residual: *r,
                })
                .collect(),
        })
        .collect();
    let certificates = res
        .certificates
        .iter()
        .map(|c| CertificateDoc {
            pair: c.pair,
            left_spectrum: spectrum_doc(&c.spectra.0),
            right_spectrum: spectrum_doc(&c.spectra.1),
            distance: c.distance,
        })
        .collect();
    let (status, unresolved) = match &res.status {
        twisted_weyl::Status::Complete => ("complete".to_string(), Vec::new()),
        twisted_weyl::Status::Incomplete(pairs) => ("incomplete".to_string(), pairs.clone()),
    };
    H1Report {
        config: config.clone(),
        torus_rank: res.torus.rank,
        torsion_count: res.points.len(),
        class_count: res.class_count(),
        weyl_order: res.weyl.order,
        points: (0..res.points.len()).map(point_doc).collect(),
        classes,
        certificates,
        status,
        unresolved,
        z_classification: None,
        timing_ms,
        seed: res.seed,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecisionDoc {
    pub pair: usize,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<(Vec<ComplexDoc>, Vec<ComplexDoc>)>,
    pub best_residual: f64,
    pub restarts_used: usize,
}

pub fn decision_doc(index: usize, d: &ConjugacyDecision) -> DecisionDoc {
    DecisionDoc {
        pair: index,
        verdict: match d.verdict {
            Verdict::Conjugate => "conjugate".into(),
            Verdict::NotConjugate => "not_conjugate".into(),
            Verdict::Undecided => "undecided".into(),
        },
        witness: d.witness.as_ref().map(|w| matrix_doc(&w.matrix)),
        certificate: d
            .certificate
            .as_ref()
            .map(|(a, b)| (spectrum_doc(a), spectrum_doc(b))),
        best_residual: d.best_residual,
        restarts_used: d.restarts_used,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecideReport {
    pub config: ScenarioConfig,
    pub decisions: Vec<DecisionDoc>,
    pub undecided_count: usize,
    pub timing_ms: u128,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    pub timing_ms: u128,
}
