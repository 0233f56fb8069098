//! Partial-transpose oracle used to cross-check the Bloch criteria. PPT is
//! necessary for separability across any cut and sufficient for two qubits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{partial_transpose, DensityMatrix};

/// Smallest partial-transpose eigenvalue still counted as non-negative.
pub const PPT_TOL: f64 = 1e-10;

/// Parties up to which every bipartition is checked.
pub const FULL_CUT_LIMIT: usize = 4;

fn check_cut(rho: &DensityMatrix, parties: &[usize]) -> Result<()> {
    let n = rho.shape().parties();
    let mut sorted = parties.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || sorted.len() >= n || sorted.iter().any(|&k| k >= n) {
        return Err(Error::Usage(format!(
            "bipartition {parties:?} is trivial or out of range for {n} parties"
        )));
    }
    Ok(())
}

/// Smallest eigenvalue of the partial transpose over `parties` (0-based).
pub fn ppt_min_eigenvalue(rho: &DensityMatrix, parties: &[usize]) -> Result<f64> {
    check_cut(rho, parties)?;
    partial_transpose(rho, parties)?.min_eigenvalue()
}

pub fn is_ppt(rho: &DensityMatrix, parties: &[usize]) -> Result<bool> {
    Ok(ppt_min_eigenvalue(rho, parties)? >= -PPT_TOL)
}

/// Cuts checked for `n` parties: every bipartition (as the side holding
/// party 0) up to [`FULL_CUT_LIMIT`] parties, single-party cuts beyond.
pub fn all_bipartitions(n: usize) -> Vec<Vec<usize>> {
    if n < 2 {
        return Vec::new();
    }
    if n > FULL_CUT_LIMIT {
        return (0..n).map(|k| vec![k]).collect();
    }
    (0..1usize << (n - 1))
        .map(|mask| {
            let mut side = vec![0];
            side.extend((1..n).filter(|&k| mask & (1 << (k - 1)) != 0));
            side
        })
        .filter(|side| side.len() < n)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    pub parties: Vec<usize>,
    pub min_eigenvalue: f64,
    pub ppt: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub cuts: Vec<CutResult>,
    pub all_ppt: bool,
}

pub fn ppt_report(rho: &DensityMatrix) -> Result<PptReport> {
    let cuts = all_bipartitions(rho.shape().parties())
        .into_iter()
        .map(|parties| {
            let min_eigenvalue = ppt_min_eigenvalue(rho, &parties)?;
            Ok(CutResult {
                parties,
                min_eigenvalue,
                ppt: min_eigenvalue >= -PPT_TOL,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_ppt = cuts.iter().all(|c| c.ppt);
    Ok(PptReport { cuts, all_ppt })
}

/// Exact separability test for a two-qubit state.
pub fn two_qubit_separable(rho: &DensityMatrix) -> Result<bool> {
    if rho.shape().dims() != [2, 2] {
        return Err(Error::UnsupportedShape(format!(
            "two_qubit_separable needs shape [2,2], got {}",
            rho.shape()
        )));
    }
    is_ppt(rho, &[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{isotropic, random_states, RandomKind};
    use crate::linalg::SystemShape;

    #[test]
    fn bipartition_counts() {
        assert_eq!(all_bipartitions(2), vec![vec![0]]);
        assert_eq!(all_bipartitions(3), vec![vec![0], vec![0, 1], vec![0, 2]]);
        assert_eq!(all_bipartitions(4).len(), 7);
        assert_eq!(all_bipartitions(5).len(), 5);
        assert!(all_bipartitions(1).is_empty());
    }

    #[test]
    fn maximally_mixed_is_ppt() {
        let rho = DensityMatrix::maximally_mixed(&SystemShape::qubits(4).unwrap());
        assert!(ppt_report(&rho).unwrap().all_ppt);
    }

    #[test]
    fn isotropic_qubits() {
        assert!(!two_qubit_separable(&isotropic(2, 0.5).unwrap()).unwrap());
        assert!(two_qubit_separable(&isotropic(2, 1.0 / 3.0).unwrap()).unwrap());
        assert!(!two_qubit_separable(&isotropic(2, 1.0).unwrap()).unwrap());
        assert!(two_qubit_separable(&isotropic(3, 0.1).unwrap()).is_err());
    }

    #[test]
    fn product_mixtures_are_ppt() {
        let s = SystemShape::qubits(2).unwrap();
        for rho in random_states(&s, RandomKind::ProductMixture, 3, 20).unwrap() {
            assert!(two_qubit_separable(&rho).unwrap());
        }
    }

    #[test]
    fn trivial_cuts_rejected() {
        let rho = DensityMatrix::maximally_mixed(&SystemShape::qubits(2).unwrap());
        assert!(is_ppt(&rho, &[]).is_err());
        assert!(is_ppt(&rho, &[0, 1]).is_err());
        assert!(is_ppt(&rho, &[2]).is_err());
    }
}
