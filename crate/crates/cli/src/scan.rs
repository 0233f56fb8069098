//! Parameter sweeps over catalog families, with optional bisection of the
//! points where a criterion changes its verdict.

use std::collections::BTreeMap;

use blochsep::catalog::catalog_entry;
use blochsep::{analyze, AnalysisOptions, CriterionVerdict, DensityMatrix, SystemShape, Verdict};
use rayon::prelude::*;

use crate::report::format_p;
use crate::{CliError, CliResult};

/// Bisection stops once the bracket is this narrow.
pub const BISECT_WIDTH: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub family: String,
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub fixed: BTreeMap<String, f64>,
    pub options: AnalysisOptions,
    pub shape_override: Option<SystemShape>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub value: f64,
    pub records: Vec<CriterionVerdict>,
    pub verdict: Verdict,
    pub all_ppt: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition {
    pub record: String,
    pub left: f64,
    pub right: f64,
    pub left_verdict: Verdict,
    pub right_verdict: Verdict,
}

impl ScanSpec {
    pub fn validate(&self) -> CliResult<()> {
        let entry = catalog_entry(&self.family)?;
        entry.resolve(&self.fixed)?;
        if !entry.parameters.iter().any(|(k, _)| *k == self.param) {
            return Err(CliError::Usage(format!("family {} has no parameter {:?}", self.family, self.param)));
        }
        if self.steps == 0 || !self.from.is_finite() || !self.to.is_finite() {
            return Err(CliError::Usage("need a finite range and at least one step".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i == self.steps - 1 {
                    self.to
                } else {
                    self.from + (self.to - self.from) * i as f64 / last
                }
            })
            .collect()
    }

    pub fn state_at(&self, value: f64) -> CliResult<DensityMatrix> {
        let mut params = self.fixed.clone();
        params.insert(self.param.clone(), value);
        let rho = blochsep::catalog::build(&self.family, &params)?;
        match &self.shape_override {
            Some(s) => Ok(rho.with_shape(s.clone())?),
            None => Ok(rho),
        }
    }

    pub fn evaluate(&self, value: f64) -> CliResult<ScanRow> {
        let rho = self.state_at(value)?;
        let a = analyze(&rho, &self.options)?;
        Ok(ScanRow {
            value,
            records: a.records.into_iter().map(|c| c.verdict).collect(),
            verdict: a.verdict,
            all_ppt: a.oracle.map(|o| o.all_ppt),
        })
    }
}

/// Evaluates every grid point in parallel; rows keep grid order.
pub fn run_scan(spec: &ScanSpec) -> CliResult<Vec<ScanRow>> {
    spec.validate()?;
    spec.grid().into_par_iter().map(|v| spec.evaluate(v)).collect()
}

fn column_names(rows: &[ScanRow]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for r in rows.iter().flat_map(|r| &r.records) {
        if !names.contains(&r.criterion) {
            names.push(r.criterion.clone());
        }
    }
    names
}

fn csv_error(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("writing CSV: {e}"))
}

fn finish(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    String::from_utf8(w.into_inner().map_err(csv_error)?).map_err(csv_error)
}

/// One row per grid point: the parameter, then lhs/bound/verdict per record,
/// then the combined verdict and the PPT cross-check.
pub fn rows_to_csv(param: &str, rows: &[ScanRow]) -> CliResult<String> {
    let names = column_names(rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![param.to_string()];
    for n in &names {
        header.extend([format!("{n}_lhs"), format!("{n}_bound"), format!("{n}_verdict")]);
    }
    header.extend(["verdict".to_string(), "all_ppt".to_string()]);
    w.write_record(&header).map_err(csv_error)?;
    for row in rows {
        let mut line = vec![format_p(row.value)];
        for n in &names {
            match row.records.iter().find(|r| &r.criterion == n) {
                Some(r) => line.extend([format_p(r.lhs), format_p(r.bound), r.verdict.name().to_string()]),
                None => line.extend([String::new(), String::new(), String::new()]),
            }
        }
        line.push(row.verdict.name().to_string());
        line.push(row.all_ppt.map(|b| b.to_string()).unwrap_or_default());
        w.write_record(&line).map_err(csv_error)?;
    }
    finish(w)
}

/// Resolves `name` to one record label: an exact label such as
/// "theorem1(p=2)", or a criterion name that produces a single record.
pub fn resolve_record(rows: &[ScanRow], name: &str) -> CliResult<String> {
    let names = column_names(rows);
    if names.iter().any(|n| n == name) {
        return Ok(name.to_string());
    }
    let prefixed: Vec<&String> = names.iter().filter(|n| n.starts_with(&format!("{name}("))).collect();
    match prefixed.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(CliError::Usage(format!("no record named {name:?}; available: {}", names.join(", ")))),
        _ => Err(CliError::Usage(format!(
            "{name:?} is ambiguous; pick one of {}",
            prefixed.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn verdict_of(spec: &ScanSpec, record: &str, value: f64) -> CliResult<Verdict> {
    let row = spec.evaluate(value)?;
    row.records
        .iter()
        .find(|r| r.criterion == record)
        .map(|r| r.verdict)
        .ok_or_else(|| CliError::Usage(format!("record {record:?} missing at {value}")))
}

/// Narrows every verdict change of `record` between adjacent grid points
/// to a bracket no wider than [`BISECT_WIDTH`].
pub fn bisect_transitions(spec: &ScanSpec, rows: &[ScanRow], record: &str) -> CliResult<Vec<Transition>> {
    let options = AnalysisOptions {
        run_oracle: false,
        ..spec.options.clone()
    };
    let quiet = ScanSpec { options, ..spec.clone() };
    let at = |row: &ScanRow| row.records.iter().find(|r| r.criterion == record).map(|r| r.verdict);
    let pairs: Vec<(f64, f64, Verdict, Verdict)> = rows
        .windows(2)
        .filter_map(|w| match (at(&w[0]), at(&w[1])) {
            (Some(a), Some(b)) if a != b => Some((w[0].value, w[1].value, a, b)),
            _ => None,
        })
        .collect();
    pairs
        .into_par_iter()
        .map(|(mut left, mut right, left_verdict, _)| {
            while (right - left).abs() > BISECT_WIDTH {
                let mid = 0.5 * (left + right);
                if mid == left || mid == right {
                    break;
                }
                if verdict_of(&quiet, record, mid)? == left_verdict {
                    left = mid;
                } else {
                    right = mid;
                }
            }
            Ok(Transition {
                record: record.to_string(),
                left,
                right,
                left_verdict,
                right_verdict: verdict_of(&quiet, record, right)?,
            })
        })
        .collect()
}

pub fn transitions_to_csv(param: &str, transitions: &[Transition]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["record", &format!("{param}_left"), &format!("{param}_right"), "verdict_left", "verdict_right"])
        .map_err(csv_error)?;
    for t in transitions {
        w.write_record([
            t.record.clone(),
            format_p(t.left),
            format_p(t.right),
            t.left_verdict.name().to_string(),
            t.right_verdict.name().to_string(),
        ])
        .map_err(csv_error)?;
    }
    finish(w)
}
