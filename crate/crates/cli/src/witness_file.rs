//! Witness output: matrices, offsets, sign patterns and `Tr(rho W)`.

use std::collections::BTreeMap;

use blochsep::witness::{build_witness, evaluate_witness, random_sign_witnesses, OffsetPreset, Witness, WitnessMode};
use blochsep::{to_bloch, BasisConvention, DensityMatrix, SystemShape};
use serde::{Deserialize, Serialize};

use crate::state_file::matrix_rows;
use crate::{CliError, CliResult};

pub const WITNESS_FORMAT: &str = "blochsep-witness/1";

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Offset {
    Preset(OffsetPreset),
    Value(f64),
}

impl std::str::FromStr for Offset {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if let Ok(p) = s.parse::<OffsetPreset>() {
            return Ok(Self::Preset(p));
        }
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Self::Value)
            .ok_or_else(|| CliError::Usage(format!("--a expects M, T1, T3 or a number, got {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    /// `Tr(rho W)`.
    pub evaluation: f64,
    pub signs: BTreeMap<String, i8>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessDocument {
    pub format: String,
    pub shape: SystemShape,
    pub mode: WitnessMode,
    pub offset_a: f64,
    /// `||rho||_1` or `||T||_1`, depending on the mode.
    pub norm: f64,
    /// `norm - a`: reached by the adapted witness, an upper bound for any
    /// other sign pattern.
    pub bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub witnesses: Vec<WitnessEntry>,
}

fn entry(w: &Witness, rho: &DensityMatrix) -> CliResult<WitnessEntry> {
    Ok(WitnessEntry {
        evaluation: evaluate_witness(w, rho)?,
        signs: w.sign_pattern.iter().map(|(idx, s)| (idx.to_string(), *s)).collect(),
        matrix: matrix_rows(&w.matrix),
    })
}

/// The witness adapted to `rho`, or `random` witnesses with uniform signs.
pub fn witness_document(
    rho: &DensityMatrix,
    offset: Offset,
    mode: WitnessMode,
    random: Option<(usize, u64)>,
) -> CliResult<WitnessDocument> {
    let b = to_bloch(rho, BasisConvention::Tilde)?;
    let a = match offset {
        Offset::Preset(p) => p.resolve(&b)?,
        Offset::Value(v) => v,
    };
    let norm = match mode {
        WitnessMode::FullNorm => b.l1_norm(),
        WitnessMode::CorrelationOnly => b.correlation_tensor().norm(1.0)?,
    };
    let witnesses = match random {
        None => vec![build_witness(&b, a, mode)?],
        Some((count, seed)) => random_sign_witnesses(rho.shape(), a, mode, count, seed)?,
    };
    Ok(WitnessDocument {
        format: WITNESS_FORMAT.into(),
        shape: rho.shape().clone(),
        mode,
        offset_a: a,
        norm,
        bound: norm - a,
        seed: random.map(|(_, s)| s),
        witnesses: witnesses.iter().map(|w| entry(w, rho)).collect::<CliResult<_>>()?,
    })
}
