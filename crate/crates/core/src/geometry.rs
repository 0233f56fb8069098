//! Separable balls around the maximally mixed state and the extremal
//! separable states that bound them.

use serde::{Deserialize, Serialize};

use crate::bloch::{from_bloch, pauli, BasisConvention, BlochVector};
use crate::error::{Error, Result};
use crate::linalg::{kron, validate_density, ComplexMatrix, DensityMatrix, SystemShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BallKind {
    /// Every state inside is separable.
    LargestSeparable,
    /// Every separable state is inside.
    MinEnclosingSeparable,
}

/// `{ rho : ||rho||_p <= radius }` in the TILDE qubit basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub p: f64,
    pub radius: f64,
    pub kind: BallKind,
}

impl BallSpec {
    pub fn largest_l1(n: usize) -> Result<Self> {
        Ok(Self {
            p: 1.0,
            radius: largest_l1_radius(n)?,
            kind: BallKind::LargestSeparable,
        })
    }

    pub fn min_enclosing(p: f64, n: usize) -> Result<Self> {
        Ok(Self {
            p,
            radius: r_e(p, n)?,
            kind: BallKind::MinEnclosingSeparable,
        })
    }

    pub fn contains(&self, b: &BlochVector) -> Result<bool> {
        Ok(b.norm(self.p)? <= self.radius)
    }
}

fn check_parties(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ParameterRange {
            name: "N".into(),
            value: 0.0,
            range: ">= 1".into(),
        });
    }
    Ok(())
}

/// Radius of the largest separable 1-norm ball for N qubits; it does not
/// shrink with N.
pub fn largest_l1_radius(n: usize) -> Result<f64> {
    check_parties(n)?;
    Ok(1.0)
}

/// Bloch vector of `(I + sigma_1^{⊗N} + eps sigma_2^{⊗N}) / 2^N`.
///
/// Its 1-norm is `1 + eps`, just outside the unit ball. For `eps > 0` the
/// matrix has a negative eigenvalue, so it is a Bloch vector rather than a
/// state; only its correlation tensor is meaningful.
pub fn tightness_family(n: usize, eps: f64) -> Result<BlochVector> {
    check_parties(n)?;
    let shape = SystemShape::qubits(n)?;
    let mut b = BlochVector::zeros(&shape, BasisConvention::Tilde);
    b.set(&vec![1; n], 1.0)?;
    b.set(&vec![2; n], eps)?;
    Ok(b)
}

/// Matrix form of [`tightness_family`], not validated.
pub fn tightness_matrix(n: usize, eps: f64) -> Result<ComplexMatrix> {
    Ok(from_bloch(&tightness_family(n, eps)?))
}

/// Radius of the smallest p-norm ball containing every N-qubit separable
/// state.
pub fn r_e(p: f64, n: usize) -> Result<f64> {
    check_parties(n)?;
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidNorm(p));
    }
    if p.is_infinite() {
        return Ok(1.0);
    }
    if p <= 2.0 {
        Ok(r_e_low_branch(p, n))
    } else {
        Ok(r_e_high_branch(p, n))
    }
}

/// `((3^(1-p/2) + 1)^N - 1)^(1/p)`, the radius for `1 <= p <= 2`.
pub fn r_e_low_branch(p: f64, n: usize) -> f64 {
    ((3f64.powf(1.0 - p / 2.0) + 1.0).powi(n as i32) - 1.0).powf(1.0 / p)
}

/// `(2^N - 1)^(1/p)`, the radius for `p > 2`.
pub fn r_e_high_branch(p: f64, n: usize) -> f64 {
    (2f64.powi(n as i32) - 1.0).powf(1.0 / p)
}

/// Interval known to contain the largest separable 2-norm radius, for
/// `N >= 2` (the lower end exceeds the upper one for a single qubit).
pub fn l2_radius_bounds(n: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::ParameterRange {
            name: "N".into(),
            value: n as f64,
            range: ">= 2".into(),
        });
    }
    let n = n as i32;
    let lower = (1.0 / ((4.0 / 9.0) * 3f64.powi(n) - 1.0)).sqrt();
    let upper = (1.0 / (2f64.powi(n) - 1.0)).sqrt();
    Ok((lower, upper))
}

/// Product state attaining [`r_e`]: the symmetric direction
/// `(1,1,1)/sqrt 3` on every qubit for `p <= 2`, a single axis otherwise.
pub fn extremal_states(p: f64, n: usize) -> Result<DensityMatrix> {
    check_parties(n)?;
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidNorm(p));
    }
    let mut local = pauli(0);
    if p <= 2.0 {
        let w = 1.0 / 3f64.sqrt();
        for i in 1..=3 {
            local.add_scaled(&pauli(i), w);
        }
    } else {
        local.add_scaled(&pauli(1), 1.0);
    }
    let local = local.scale_real(0.5);
    let shape = SystemShape::qubits(n)?;
    validate_density(kron(&vec![local; n])?, &shape, 1e-12)
}
