//! Analysis reports: one self-describing JSON document per run, carrying
//! the analysed state so certificates can be re-checked later.

use blochsep::certificates::{VerificationReport, CERTIFICATE_TOL};
use blochsep::ppt::PptReport;
use blochsep::{verify_decomposition, Analysis, AnalysisOptions, Certification, CriterionVerdict, DensityMatrix, SeparableDecomposition, SystemShape, Verdict};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::state_file::StateFile;
use crate::{float_repr, CliError, CliResult};

pub const REPORT_FORMAT: &str = "blochsep-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub shape: SystemShape,
    /// Shape declared in the input file when `--shape-override` replaced it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file_shape: Option<SystemShape>,
    pub dim: usize,
    pub purity: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Norm orders, "inf" for infinity.
    pub ps: Vec<String>,
    pub criteria: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub criterion: String,
    pub verdict: Verdict,
    #[serde(with = "float_repr")]
    pub lhs: f64,
    #[serde(with = "float_repr")]
    pub bound: f64,
    #[serde(default, with = "float_repr::map")]
    pub detail: BTreeMap<String, f64>,
    #[serde(default)]
    pub indices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<SeparableDecomposition>,
}

impl From<&Certification> for Record {
    fn from(c: &Certification) -> Self {
        let v = &c.verdict;
        Self {
            criterion: v.criterion.clone(),
            verdict: v.verdict,
            lhs: v.lhs,
            bound: v.bound,
            detail: v.detail.clone(),
            indices: v.indices.clone(),
            decomposition: c.decomposition.clone(),
        }
    }
}

impl From<&Record> for Certification {
    fn from(r: &Record) -> Self {
        Certification {
            verdict: CriterionVerdict {
                criterion: r.criterion.clone(),
                verdict: r.verdict,
                lhs: r.lhs,
                bound: r.bound,
                detail: r.detail.clone(),
                indices: r.indices.clone(),
            },
            decomposition: r.decomposition.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub input: InputSummary,
    pub options: ReportOptions,
    pub records: Vec<Record>,
    pub oracle: Option<PptReport>,
    pub oracle_consistent: bool,
    pub verdict: Verdict,
    pub state: StateFile,
}

pub fn format_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        p.to_string()
    }
}

impl Report {
    pub fn new(
        rho: &DensityMatrix,
        file_shape: Option<&SystemShape>,
        options: &AnalysisOptions,
        analysis: &Analysis,
    ) -> Self {
        Self {
            format: REPORT_FORMAT.into(),
            input: InputSummary {
                shape: rho.shape().clone(),
                file_shape: file_shape.filter(|s| *s != rho.shape()).cloned(),
                dim: rho.dim(),
                purity: rho.purity(),
                tol: rho.validation_tol(),
            },
            options: ReportOptions {
                ps: options.ps.iter().map(|&p| format_p(p)).collect(),
                criteria: options
                    .criteria
                    .as_ref()
                    .map(|cs| cs.iter().map(|c| c.name().to_string()).collect()),
            },
            records: analysis.records.iter().map(Record::from).collect(),
            oracle: analysis.oracle.clone(),
            oracle_consistent: analysis.oracle_consistent,
            verdict: analysis.verdict,
            state: StateFile::from_density(rho),
        }
    }

    pub fn record(&self, criterion: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.criterion == criterion)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecordCheck {
    pub criterion: String,
    pub report: VerificationReport,
}

/// Re-checks a loaded report: the embedded state must validate, every
/// certified record must carry a decomposition that reconstructs it, and
/// the combined verdict must follow from the records.
pub fn reverify(report: &Report) -> CliResult<Vec<RecordCheck>> {
    if report.format != REPORT_FORMAT {
        return Err(CliError::Usage(format!(
            "unsupported report format {:?}, expected {REPORT_FORMAT:?}",
            report.format
        )));
    }
    let rho = report.state.to_density(report.input.tol, None)?;
    if rho.shape() != &report.input.shape {
        return Err(CliError::Verification(format!(
            "embedded state has shape {}, summary says {}",
            rho.shape(),
            report.input.shape
        )));
    }
    let certs: Vec<Certification> = report.records.iter().map(Certification::from).collect();
    let combined = blochsep::pipeline::combine(&certs)?;
    if combined != report.verdict {
        return Err(CliError::Verification(format!(
            "records combine to {combined}, report says {}",
            report.verdict
        )));
    }
    let mut checks = Vec::new();
    for r in &report.records {
        match (&r.decomposition, r.verdict) {
            (Some(d), _) => {
                let v = verify_decomposition(d, rho.matrix(), CERTIFICATE_TOL);
                if !v.passed {
                    return Err(CliError::Verification(format!("{}: {}", r.criterion, v.violations.join("; "))));
                }
                checks.push(RecordCheck {
                    criterion: r.criterion.clone(),
                    report: v,
                });
            }
            (None, Verdict::SeparableCertified) => {
                return Err(CliError::Verification(format!(
                    "{} certifies separability without a decomposition",
                    r.criterion
                )))
            }
            (None, _) => {}
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use blochsep::analyze;
    use blochsep::catalog::noisy_ghz;

    fn ghz_report(alpha: f64) -> Report {
        let rho = noisy_ghz(3, alpha).unwrap();
        let opts = AnalysisOptions {
            ps: vec![1.0, f64::INFINITY],
            ..Default::default()
        };
        Report::new(&rho, None, &opts, &analyze(&rho, &opts).unwrap())
    }

    #[test]
    fn report_survives_json_and_reverifies() {
        let report = ghz_report(0.15);
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        let checks = reverify(&back).unwrap();
        assert!(checks.iter().any(|c| c.criterion == "theorem4"));
        assert_eq!(back.record("theorem1(p=inf)").unwrap().detail["p"], f64::INFINITY);
    }

    #[test]
    fn tampering_is_detected() {
        let mut report = ghz_report(0.15);
        let rec = report.records.iter_mut().find(|r| r.criterion == "theorem4").unwrap();
        rec.decomposition.as_mut().unwrap().terms[0].weight += 0.01;
        assert!(matches!(reverify(&report), Err(CliError::Verification(_))));

        let mut report = ghz_report(0.15);
        report.records.iter_mut().for_each(|r| r.decomposition = None);
        assert!(matches!(reverify(&report), Err(CliError::Verification(_))));

        let mut report = ghz_report(0.6);
        report.verdict = Verdict::Inconclusive;
        assert!(matches!(reverify(&report), Err(CliError::Verification(_))));
    }
}
