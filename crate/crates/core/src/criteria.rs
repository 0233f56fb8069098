//! Necessary conditions for full separability on the correlation tensor.
//! A violation certifies entanglement; non-violation proves nothing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bloch::{CorrelationTensor, ZERO_TOL};
use crate::error::{Error, Result};
use crate::linalg::SystemShape;

/// Slack used for every strict-inequality verdict.
pub const DECISION_TOL: f64 = 1e-9;

/// Sign with `sgn(0) = 0`; magnitudes below [`ZERO_TOL`] count as zero.
pub fn sgn(x: f64) -> i8 {
    if x.abs() < ZERO_TOL {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Entangled,
    SeparableCertified,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Self::Entangled => "ENTANGLED",
            Self::SeparableCertified => "SEPARABLE_CERTIFIED",
            Self::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ENTANGLED" => Ok(Self::Entangled),
            "SEPARABLE_CERTIFIED" => Ok(Self::SeparableCertified),
            "INCONCLUSIVE" => Ok(Self::Inconclusive),
            other => Err(Error::Usage(format!("unknown verdict {other:?}"))),
        }
    }
}

/// Outcome of one criterion: the compared quantities plus any chosen indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: String,
    pub verdict: Verdict,
    pub lhs: f64,
    pub bound: f64,
    #[serde(default)]
    pub detail: BTreeMap<String, f64>,
    /// Multi-indices (or index tuples) the criterion selected, if any.
    #[serde(default)]
    pub indices: Vec<Vec<usize>>,
}

impl CriterionVerdict {
    pub fn new(criterion: impl Into<String>, verdict: Verdict, lhs: f64, bound: f64) -> Self {
        Self {
            criterion: criterion.into(),
            verdict,
            lhs,
            bound,
            detail: BTreeMap::new(),
            indices: Vec::new(),
        }
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.detail.insert(key.to_string(), value);
        self
    }

    /// `lhs - bound`; positive means the criterion's inequality is violated.
    pub fn margin(&self) -> f64 {
        self.lhs - self.bound
    }
}

/// Entrywise signs of a correlation tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignTensor {
    shape: SystemShape,
    entries: Vec<i8>,
}

impl SignTensor {
    pub fn new(shape: &SystemShape, entries: Vec<i8>) -> Result<Self> {
        if entries.len() != shape.correlation_len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", shape.correlation_len()),
                found: format!("{} entries", entries.len()),
            });
        }
        if entries.iter().any(|e| !(-1..=1).contains(e)) {
            return Err(Error::Usage("sign entries must be -1, 0 or 1".into()));
        }
        Ok(Self {
            shape: shape.clone(),
            entries,
        })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn get(&self, idx: &[usize]) -> Result<i8> {
        let t = CorrelationTensor::new(&self.shape, vec![0.0; self.entries.len()])?;
        Ok(self.entries[t.position(idx)?])
    }
}

pub fn sign_tensor(t: &CorrelationTensor) -> SignTensor {
    SignTensor {
        shape: t.shape().clone(),
        entries: t.values().iter().map(|&v| sgn(v)).collect(),
    }
}

/// `prod m_k^(1/p - 1/2)` for `1 <= p <= 2`, otherwise 1.
pub fn theorem1_bound(shape: &SystemShape, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidNorm(p));
    }
    if p > 2.0 {
        return Ok(1.0);
    }
    let exponent = 1.0 / p - 0.5;
    Ok(shape
        .dims()
        .iter()
        .map(|&d| ((d * d - 1) as f64).powf(exponent))
        .product())
}

pub fn theorem1_check(t: &CorrelationTensor, p: f64) -> Result<CriterionVerdict> {
    let bound = theorem1_bound(t.shape(), p)?;
    let lhs = t.norm(p)?;
    let verdict = if lhs > bound + DECISION_TOL {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    };
    Ok(CriterionVerdict::new(format!("theorem1(p={})", format_p(p)), verdict, lhs, bound).with_detail("p", p))
}

pub(crate) fn format_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

/// `M = (1/N) sum_k max_a sum |t|` over entries whose k-th index is `a`.
#[allow(non_snake_case)]
pub fn theorem2_M(t: &SignTensor) -> f64 {
    let lens: Vec<usize> = t.shape.dims().iter().map(|d| d * d - 1).collect();
    let parties = lens.len();
    let mut slice_sums: Vec<Vec<u64>> = lens.iter().map(|&m| vec![0; m]).collect();
    for (pos, &e) in t.entries.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let mut rest = pos;
        for k in (0..parties).rev() {
            slice_sums[k][rest % lens[k]] += 1;
            rest /= lens[k];
        }
    }
    let total: u64 = slice_sums
        .iter()
        .map(|s| s.iter().copied().max().unwrap_or(0))
        .sum();
    total as f64 / parties as f64
}

pub fn theorem2_check(t: &CorrelationTensor) -> CriterionVerdict {
    let m = theorem2_M(&sign_tensor(t));
    let lhs = t.values().iter().map(|v| v.abs()).sum::<f64>();
    let verdict = if lhs > m + DECISION_TOL {
        Verdict::Entangled
    } else {
        Verdict::Inconclusive
    };
    CriterionVerdict::new("theorem2", verdict, lhs, m)
        .with_detail("t_norm_1", lhs)
        .with_detail("M", m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tensor(dims: &[usize], entries: &[(&[usize], f64)]) -> CorrelationTensor {
        let shape = SystemShape::new(dims.to_vec()).unwrap();
        let mut t = CorrelationTensor::new(&shape, vec![0.0; shape.correlation_len()]).unwrap();
        let mut values = t.values().to_vec();
        for (idx, v) in entries {
            values[t.position(idx).unwrap()] = *v;
        }
        t = CorrelationTensor::new(&shape, values).unwrap();
        t
    }

    #[test]
    fn theorem1_bounds() {
        for n in 1..=5 {
            let s = SystemShape::qubits(n).unwrap();
            let b = theorem1_bound(&s, 1.0).unwrap();
            assert!((b - 3f64.powf(n as f64 / 2.0)).abs() < 1e-12);
            assert_eq!(theorem1_bound(&s, 2.0).unwrap(), 1.0);
            assert_eq!(theorem1_bound(&s, 3.0).unwrap(), 1.0);
            assert_eq!(theorem1_bound(&s, f64::INFINITY).unwrap(), 1.0);
        }
        let s = SystemShape::new(vec![2, 3]).unwrap();
        assert!((theorem1_bound(&s, 1.0).unwrap() - (3.0f64 * 8.0).sqrt()).abs() < 1e-12);
        assert!(matches!(theorem1_bound(&s, 0.9), Err(Error::InvalidNorm(_))));
    }

    #[test]
    fn zero_tensor_is_inconclusive() {
        let t = tensor(&[2, 2, 2], &[]);
        for p in [1.0, 1.5, 2.0, f64::INFINITY] {
            assert_eq!(theorem1_check(&t, p).unwrap().verdict, Verdict::Inconclusive);
        }
        assert_eq!(theorem2_M(&sign_tensor(&t)), 0.0);
        assert!(sign_tensor(&t).entries().iter().all(|&e| e == 0));
    }

    #[test]
    fn isotropic_qubit_signs_and_m() {
        let a = 0.3;
        let t = tensor(&[2, 2], &[(&[1, 1], a), (&[2, 2], -a), (&[3, 3], a)]);
        let s = sign_tensor(&t);
        assert_eq!(s.entries(), &[1, 0, 0, 0, -1, 0, 0, 0, 1]);
        assert_eq!(theorem2_M(&s), 1.0);
        let v = theorem2_check(&t);
        assert!((v.lhs - 0.9).abs() < 1e-15);
        assert_eq!(v.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn state_a_signs_and_m() {
        let a = 0.6;
        let t = tensor(&[2, 2, 2], &[(&[1, 3, 1], a), (&[2, 2, 2], a)]);
        let s = sign_tensor(&t);
        assert_eq!(s.get(&[1, 3, 1]).unwrap(), 1);
        assert_eq!(s.get(&[2, 2, 2]).unwrap(), 1);
        assert_eq!(s.entries().iter().filter(|&&e| e != 0).count(), 2);
        assert_eq!(theorem2_M(&s), 1.0);
        assert_eq!(theorem2_check(&t).verdict, Verdict::Entangled);
    }

    #[test]
    fn ghz3_m_is_two() {
        // GHZ correlations: xxx, and the three -1 entries with two y's
        let a = 0.55;
        let t = tensor(
            &[2, 2, 2],
            &[(&[1, 1, 1], a), (&[1, 2, 2], -a), (&[2, 1, 2], -a), (&[2, 2, 1], -a)],
        );
        assert_eq!(theorem2_M(&sign_tensor(&t)), 2.0);
        let v = theorem2_check(&t);
        assert!((v.lhs - 4.0 * a).abs() < 1e-15);
        assert_eq!(v.verdict, Verdict::Entangled);
    }

    #[test]
    fn sgn_treats_tiny_values_as_zero() {
        assert_eq!(sgn(1e-13), 0);
        assert_eq!(sgn(-1e-11), -1);
        assert_eq!(sgn(0.0), 0);
    }

    #[test]
    fn decision_tolerance_is_respected() {
        let t = tensor(&[2, 2], &[(&[1, 1], 0.5), (&[2, 2], 0.5 + 5e-10)]);
        assert_eq!(theorem2_check(&t).verdict, Verdict::Inconclusive);
        let t = tensor(&[2, 2], &[(&[1, 1], 0.5), (&[2, 2], 0.5 + 5e-9)]);
        assert_eq!(theorem2_check(&t).verdict, Verdict::Entangled);
    }
}
