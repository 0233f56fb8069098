//! Runs every applicable criterion on one state and combines the verdicts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bloch::{to_bloch, BasisConvention, BlochVector};
use crate::certificates::{theorem3, theorem4, theorem5, theorem6, theorem7, Certification};
use crate::criteria::{theorem1_check, theorem2_check, Verdict};
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::ppt::{ppt_report, PptReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Theorem5,
    Theorem6,
    Theorem7,
}

impl Criterion {
    pub const ALL: [Criterion; 7] = [
        Self::Theorem1,
        Self::Theorem2,
        Self::Theorem3,
        Self::Theorem4,
        Self::Theorem5,
        Self::Theorem6,
        Self::Theorem7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Theorem1 => "theorem1",
            Self::Theorem2 => "theorem2",
            Self::Theorem3 => "theorem3",
            Self::Theorem4 => "theorem4",
            Self::Theorem5 => "theorem5",
            Self::Theorem6 => "theorem6",
            Self::Theorem7 => "theorem7",
        }
    }

    /// Whether the criterion can only certify (as opposed to detect).
    pub fn is_sufficient(self) -> bool {
        !matches!(self, Self::Theorem1 | Self::Theorem2)
    }

    /// Whether the criterion is defined on this shape.
    pub fn applies_to(self, rho: &DensityMatrix) -> bool {
        let s = rho.shape();
        match self {
            Self::Theorem1 | Self::Theorem2 => true,
            Self::Theorem3 => s.is_all_qubits(),
            Self::Theorem4 | Self::Theorem5 => s.is_all_qubits() && s.parties() == 3,
            Self::Theorem6 => s.is_all_qubits() && s.parties() == 4,
            Self::Theorem7 => !s.is_all_qubits(),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Usage(format!("unknown criterion {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisOptions {
    /// Norm orders for the correlation-norm criterion.
    pub ps: Vec<f64>,
    /// Criteria to run; `None` runs every applicable one.
    pub criteria: Option<Vec<Criterion>>,
    pub run_oracle: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            ps: vec![1.0, 2.0],
            criteria: None,
            run_oracle: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub records: Vec<Certification>,
    pub oracle: Option<PptReport>,
    pub verdict: Verdict,
    /// False when a certified state fails PPT somewhere, or an entangled
    /// two-qubit verdict meets a PPT state.
    pub oracle_consistent: bool,
}

impl Analysis {
    pub fn record(&self, criterion: &str) -> Option<&Certification> {
        self.records.iter().find(|r| r.verdict.criterion == criterion)
    }
}

/// Combined verdict; detection and certification together are a bug.
pub fn combine(records: &[Certification]) -> Result<Verdict> {
    let entangled = records.iter().find(|r| r.verdict.verdict == Verdict::Entangled);
    let certified = records.iter().find(|r| r.verdict.verdict == Verdict::SeparableCertified);
    match (entangled, certified) {
        (Some(e), Some(c)) => Err(Error::NumericalInconsistency(format!(
            "{} reports ENTANGLED while {} certifies separability",
            e.verdict.criterion, c.verdict.criterion
        ))),
        (Some(_), None) => Ok(Verdict::Entangled),
        (None, Some(_)) => Ok(Verdict::SeparableCertified),
        (None, None) => Ok(Verdict::Inconclusive),
    }
}

fn necessary(v: crate::criteria::CriterionVerdict) -> Certification {
    Certification {
        verdict: v,
        decomposition: None,
    }
}

/// Runs one criterion on precomputed Bloch vectors.
pub fn run_criterion(
    criterion: Criterion,
    tilde: &BlochVector,
    check: Option<&BlochVector>,
    ps: &[f64],
) -> Result<Vec<Certification>> {
    Ok(match criterion {
        Criterion::Theorem1 => {
            let t = tilde.correlation_tensor();
            ps.iter()
                .map(|&p| theorem1_check(&t, p).map(necessary))
                .collect::<Result<_>>()?
        }
        Criterion::Theorem2 => vec![necessary(theorem2_check(&tilde.correlation_tensor()))],
        Criterion::Theorem3 => vec![theorem3(tilde)?],
        Criterion::Theorem4 => vec![theorem4(tilde)?],
        Criterion::Theorem5 => vec![theorem5(tilde)?],
        Criterion::Theorem6 => vec![theorem6(tilde)?],
        Criterion::Theorem7 => {
            let owned;
            let check = match check {
                Some(c) => c,
                None => {
                    owned = tilde_to_check(tilde)?;
                    &owned
                }
            };
            vec![theorem7(check)?]
        }
    })
}

fn tilde_to_check(tilde: &BlochVector) -> Result<BlochVector> {
    if tilde.shape().is_all_qubits() {
        return Ok(tilde.relabel(BasisConvention::Check));
    }
    Err(Error::UnsupportedConvention(
        "CHECK components are required for non-qubit shapes".into(),
    ))
}

pub fn analyze(rho: &DensityMatrix, options: &AnalysisOptions) -> Result<Analysis> {
    let selected: Vec<Criterion> = match &options.criteria {
        Some(list) => {
            if let Some(bad) = list.iter().find(|c| !c.applies_to(rho)) {
                return Err(Error::UnsupportedShape(format!("{bad} does not apply to shape {}", rho.shape())));
            }
            list.clone()
        }
        None => Criterion::ALL.into_iter().filter(|c| c.applies_to(rho)).collect(),
    };
    let tilde = to_bloch(rho, BasisConvention::Tilde)?;
    let check = if selected.contains(&Criterion::Theorem7) {
        Some(to_bloch(rho, BasisConvention::Check)?)
    } else {
        None
    };
    let mut records = Vec::new();
    for c in selected {
        records.extend(run_criterion(c, &tilde, check.as_ref(), &options.ps)?);
    }
    let verdict = combine(&records)?;
    let oracle = if options.run_oracle && rho.shape().parties() >= 2 {
        Some(ppt_report(rho)?)
    } else {
        None
    };
    let oracle_consistent = match &oracle {
        None => true,
        Some(o) => {
            let certified_but_npt = verdict == Verdict::SeparableCertified && !o.all_ppt;
            let two_qubit_mismatch =
                verdict == Verdict::Entangled && rho.shape().dims() == [2, 2] && o.all_ppt;
            !(certified_but_npt || two_qubit_mismatch)
        }
    };
    Ok(Analysis {
        records,
        oracle,
        verdict,
        oracle_consistent,
    })
}
