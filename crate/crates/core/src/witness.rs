//! Witness operators whose expectation value reproduces a signed Bloch
//! 1-norm: `Tr(rho W) = sum_alpha s_alpha rho_alpha - a`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bloch::{for_each_kron_entry, local_basis, BasisConvention, BlochVector, MultiIndex, SparseEntries};
use crate::criteria::{sgn, sign_tensor, theorem1_bound, theorem2_M};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, SystemShape};

/// Largest imaginary part tolerated in `Tr(rho W)`.
pub const WITNESS_IMAG_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessMode {
    /// Every non-trivial multi-index.
    FullNorm,
    /// Only multi-indices nonzero at every party.
    CorrelationOnly,
}

impl WitnessMode {
    fn includes(self, idx: &[usize]) -> bool {
        match self {
            Self::FullNorm => idx.iter().any(|&i| i != 0),
            Self::CorrelationOnly => idx.iter().all(|&i| i != 0),
        }
    }
}

impl fmt::Display for WitnessMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::FullNorm => "FULL_NORM",
            Self::CorrelationOnly => "CORRELATION_ONLY",
        })
    }
}

impl FromStr for WitnessMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" | "full_norm" => Ok(Self::FullNorm),
            "correlation" | "correlation_only" => Ok(Self::CorrelationOnly),
            other => Err(Error::Usage(format!("unknown witness mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub shape: SystemShape,
    pub matrix: ComplexMatrix,
    pub offset_a: f64,
    pub mode: WitnessMode,
    /// Nonzero signs only, in storage order.
    pub sign_pattern: Vec<(MultiIndex, i8)>,
}

/// Named choices of the offset `a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OffsetPreset {
    /// `a = 1`, dual to the unit 1-norm ball.
    Unit,
    /// `a = prod sqrt(n_k^2 - 1)`, the p = 1 correlation bound.
    CorrelationBound,
    /// `a = M(rho)` from the sign tensor.
    SignSlices,
}

impl OffsetPreset {
    pub fn resolve(self, b: &BlochVector) -> Result<f64> {
        match self {
            Self::Unit => Ok(1.0),
            Self::CorrelationBound => theorem1_bound(b.shape(), 1.0),
            Self::SignSlices => Ok(theorem2_M(&sign_tensor(&b.correlation_tensor()))),
        }
    }
}

impl FromStr for OffsetPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T3" | "t3" | "1" => Ok(Self::Unit),
            "T1" | "t1" => Ok(Self::CorrelationBound),
            "M" | "m" => Ok(Self::SignSlices),
            other => Err(Error::Usage(format!("unknown offset preset {other:?}"))),
        }
    }
}

fn witness_from_signs(
    shape: &SystemShape,
    a: f64,
    mode: WitnessMode,
    signs: Vec<(MultiIndex, i8)>,
) -> Witness {
    let dims = shape.dims();
    let n = shape.total_dim();
    let bases: Vec<_> = dims.iter().map(|&d| local_basis(d, BasisConvention::Tilde)).collect();
    let mut m = ComplexMatrix::identity(n).scale_real(-a);
    for (idx, s) in &signs {
        let locals: Vec<&SparseEntries> = bases.iter().zip(&idx.0).map(|(b, &i)| &b.elements[i]).collect();
        let sq: f64 = bases.iter().zip(&idx.0).map(|(b, &i)| b.square_traces[i]).product();
        let coeff = n as f64 * *s as f64 / sq;
        for_each_kron_entry(&locals, dims, &mut |r, c, v| m[(r, c)] += v * coeff);
    }
    Witness {
        shape: shape.clone(),
        matrix: m,
        offset_a: a,
        mode,
        sign_pattern: signs,
    }
}

/// `W = -a I + sum n Sgn(rho_alpha) / Tr(B_alpha^2) B_alpha` over the indices
/// selected by `mode`.
pub fn build_witness(b: &BlochVector, a: f64, mode: WitnessMode) -> Result<Witness> {
    if b.convention() != BasisConvention::Tilde && !b.shape().is_all_qubits() {
        return Err(Error::UnsupportedConvention(format!(
            "witnesses are built from TILDE components, got {}",
            b.convention()
        )));
    }
    let signs = b
        .iter()
        .filter(|(idx, v)| mode.includes(&idx.0) && sgn(*v) != 0)
        .map(|(idx, v)| (idx, sgn(v)))
        .collect();
    Ok(witness_from_signs(b.shape(), a, mode, signs))
}

/// `Re Tr(rho W)`.
pub fn evaluate_witness(w: &Witness, rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != w.matrix.rows() {
        return Err(Error::ShapeMismatch {
            expected: format!("{0}x{0}", w.matrix.rows()),
            found: format!("{0}x{0}", rho.dim()),
        });
    }
    let t: Complex64 = rho.matrix().trace_of_product(&w.matrix);
    if t.im.abs() > WITNESS_IMAG_TOL {
        return Err(Error::NumericalInconsistency(format!(
            "Tr(rho W) has imaginary part {:e}",
            t.im
        )));
    }
    Ok(t.re)
}

/// `count` witnesses with independent uniform sign patterns, reproducible
/// from `seed`. Each satisfies `Tr(rho W) <= ||rho||_1 - a` (or the
/// correlation-only analogue) for every state.
pub fn random_sign_witnesses(
    shape: &SystemShape,
    a: f64,
    mode: WitnessMode,
    count: usize,
    seed: u64,
) -> Result<Vec<Witness>> {
    if count == 0 {
        return Err(Error::Usage("count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = BlochVector::zeros(shape, BasisConvention::Tilde);
    let indices: Vec<MultiIndex> = (0..shape.bloch_len())
        .map(|p| zero.index_at(p))
        .filter(|idx| mode.includes(&idx.0))
        .collect();
    Ok((0..count)
        .map(|_| {
            let signs = indices
                .iter()
                .map(|idx| (idx.clone(), if rng.random::<bool>() { 1 } else { -1 }))
                .collect();
            witness_from_signs(shape, a, mode, signs)
        })
        .collect())
}
