//! State files: a shape plus either a dense matrix of `[re, im]` pairs or a
//! sparse Bloch vector keyed by comma-joined multi-indices.

use std::collections::BTreeMap;
use std::path::Path;

use blochsep::{from_bloch, validate_density, BasisConvention, BlochVector, ComplexMatrix, DensityMatrix, MultiIndex, SystemShape};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{from_json, read_text, CliError, CliResult};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub shape: SystemShape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<BlochSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochSection {
    pub convention: BasisConvention,
    /// Missing entries are zero; the all-zero index is implicit.
    pub components: BTreeMap<String, f64>,
}

pub fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> CliResult<ComplexMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Usage("matrix must be a non-empty square array".into()));
    }
    let data = rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
    Ok(ComplexMatrix::new(n, n, data)?)
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self {
            shape: rho.shape().clone(),
            matrix: Some(matrix_rows(rho.matrix())),
            bloch: None,
        }
    }

    /// Sparse Bloch form listing the nonzero components.
    pub fn from_bloch_vector(b: &BlochVector) -> Self {
        Self {
            shape: b.shape().clone(),
            matrix: None,
            bloch: Some(BlochSection {
                convention: b.convention(),
                components: b.nonzero().map(|(idx, v)| (idx.to_string(), v)).collect(),
            }),
        }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        from_json(&read_text(path)?, path)
    }

    /// Validated state, optionally reinterpreted under another shape of the
    /// same total dimension.
    pub fn to_density(&self, tol: f64, shape_override: Option<&SystemShape>) -> CliResult<DensityMatrix> {
        let m = match (&self.matrix, &self.bloch) {
            (Some(rows), None) => matrix_from_rows(rows)?,
            (None, Some(section)) => {
                let mut b = BlochVector::zeros(&self.shape, section.convention);
                for (key, &v) in &section.components {
                    let idx: MultiIndex = key.parse()?;
                    if idx.is_zero() {
                        if v != 1.0 {
                            return Err(CliError::Usage(format!(
                                "the all-zero component is fixed at 1, got {v}"
                            )));
                        }
                        continue;
                    }
                    b.set(idx.as_slice(), v)?;
                }
                from_bloch(&b)
            }
            _ => {
                return Err(CliError::Usage(
                    "a state file needs exactly one of \"matrix\" or \"bloch\"".into(),
                ))
            }
        };
        let rho = validate_density(m, &self.shape, tol)?;
        match shape_override {
            Some(s) => Ok(rho.with_shape(s.clone())?),
            None => Ok(rho),
        }
    }
}
