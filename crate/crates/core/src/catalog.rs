//! State families with known separability thresholds, plus seeded random
//! states for property tests.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bloch::pauli;
use crate::error::{Error, Result};
use crate::linalg::{kron, validate_density, ComplexMatrix, DensityMatrix, SystemShape};

/// Validation tolerance for catalog states.
pub const CATALOG_TOL: f64 = 1e-10;

fn in_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::ParameterRange {
            name: name.into(),
            value,
            range: format!("[{lo}, {hi}]"),
        });
    }
    Ok(())
}

fn noisy(pure: &ComplexMatrix, alpha: f64) -> ComplexMatrix {
    let n = pure.rows();
    let mut m = ComplexMatrix::identity(n).scale_real((1.0 - alpha) / n as f64);
    m.add_scaled(pure, alpha);
    m
}

/// `(1 - alpha) I / d^2 + alpha |phi+><phi+|` on `[d, d]`.
pub fn isotropic(d: usize, alpha: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::ParameterRange {
            name: "d".into(),
            value: d as f64,
            range: ">= 2".into(),
        });
    }
    in_range("alpha", alpha, 0.0, 1.0)?;
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = amp;
    }
    validate_density(noisy(&ComplexMatrix::outer(&v), alpha), &SystemShape::new(vec![d, d])?, CATALOG_TOL)
}

/// `(1 - alpha) I / 2^N + alpha |GHZ><GHZ|` with `|GHZ> = (|0..0> + |1..1>)/sqrt 2`.
pub fn noisy_ghz(n: usize, alpha: f64) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::ParameterRange {
            name: "N".into(),
            value: n as f64,
            range: ">= 2".into(),
        });
    }
    in_range("alpha", alpha, 0.0, 1.0)?;
    let dim = 1usize << n;
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[0] = Complex64::new(0.5f64.sqrt(), 0.0);
    v[dim - 1] = v[0];
    validate_density(noisy(&ComplexMatrix::outer(&v), alpha), &SystemShape::qubits(n)?, CATALOG_TOL)
}

/// `(I + alpha (sigma_1 sigma_3 sigma_1 + sigma_2 sigma_2 sigma_2)) / 8`.
///
/// The two correlation operators anticommute, so the smallest eigenvalue
/// is `(1 - sqrt 2 alpha) / 8`; positivity is checked, not assumed.
pub fn state_a(alpha: f64) -> Result<DensityMatrix> {
    in_range("alpha", alpha, 0.0, 1.0)?;
    let mut m = ComplexMatrix::identity(8);
    m.add_scaled(&kron(&[pauli(1), pauli(3), pauli(1)])?, alpha);
    m.add_scaled(&kron(&[pauli(2), pauli(2), pauli(2)])?, alpha);
    let m = m.scale_real(1.0 / 8.0);
    let shape = SystemShape::qubits(3)?;
    validate_density(m, &shape, CATALOG_TOL).map_err(|e| match e {
        Error::NotPositiveSemidefinite { .. } => Error::ParameterRange {
            name: "alpha".into(),
            value: alpha,
            range: format!("(0, 1/sqrt 2] ({e})"),
        },
        other => other,
    })
}

/// Horodecki-type 2x4 family `alpha rho_a + (1 - alpha) I / 8` on shape
/// `[2, 4]`; ket `|i j>` sits at index `4 i + j`.
pub fn bound_entangled(a: f64, alpha: f64) -> Result<DensityMatrix> {
    in_range("a", a, 0.0, 1.0)?;
    in_range("alpha", alpha, 0.0, 1.0)?;
    let zero = Complex64::new(0.0, 0.0);
    let h = Complex64::new(0.5f64.sqrt(), 0.0);
    let mut ent = ComplexMatrix::zeros(8, 8);
    for i in 1..=3 {
        let mut psi = vec![zero; 8];
        psi[i - 1] = h;
        psi[4 + i] = h;
        ent.add_scaled(&ComplexMatrix::outer(&psi), 2.0 / 7.0);
    }
    let mut e03 = vec![zero; 8];
    e03[3] = Complex64::new(1.0, 0.0);
    ent.add_scaled(&ComplexMatrix::outer(&e03), 1.0 / 7.0);

    let mut phi = vec![zero; 8];
    phi[4] = Complex64::new(((1.0 + a) / 2.0).sqrt(), 0.0);
    phi[6] = Complex64::new(((1.0 - a) / 2.0).sqrt(), 0.0);
    let mut rho_a = ent.scale_real(7.0 * a / (7.0 * a + 1.0));
    rho_a.add_scaled(&ComplexMatrix::outer(&phi), 1.0 / (7.0 * a + 1.0));
    validate_density(noisy(&rho_a, alpha), &SystemShape::new(vec![2, 4])?, CATALOG_TOL)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RandomKind {
    /// `G G^dagger / Tr` with complex Gaussian `G`.
    Generic,
    /// Convex mixture of random pure product states; always separable.
    ProductMixture,
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

fn random_pure(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let v = gaussian_vector(rng, n);
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v: Vec<Complex64> = v.into_iter().map(|z| z / norm).collect();
    ComplexMatrix::outer(&v)
}

/// `count` random states on `shape`, reproducible from `seed`.
pub fn random_states(shape: &SystemShape, kind: RandomKind, seed: u64, count: usize) -> Result<Vec<DensityMatrix>> {
    if count == 0 {
        return Err(Error::Usage("count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = shape.total_dim();
    (0..count)
        .map(|_| {
            let m = match kind {
                RandomKind::Generic => {
                    let g = ComplexMatrix::new(n, n, gaussian_vector(&mut rng, n * n))?;
                    let m = g.matmul(&g.dagger());
                    let tr = m.trace().re;
                    m.scale_real(1.0 / tr)
                }
                RandomKind::ProductMixture => {
                    let terms = rng.random_range(1..=2 * n);
                    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
                    let total: f64 = weights.iter().sum();
                    let mut m = ComplexMatrix::zeros(n, n);
                    for w in weights {
                        let locals: Vec<ComplexMatrix> = shape.dims().iter().map(|&d| random_pure(&mut rng, d)).collect();
                        m.add_scaled(&kron(&locals)?, w / total);
                    }
                    m
                }
            };
            // G G^dagger is Hermitian only up to rounding; symmetrize exactly.
            let sym = (&m + &m.dagger()).scale_real(0.5);
            validate_density(sym, shape, CATALOG_TOL)
        })
        .collect()
}

/// A named family and its parameters with default values.
#[derive(Clone, Copy, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub parameters: &'static [(&'static str, f64)],
    pub description: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "isotropic",
        parameters: &[("d", 2.0), ("alpha", 0.5)],
        description: "white noise plus the maximally entangled state on [d,d]",
    },
    CatalogEntry {
        name: "noisy_ghz",
        parameters: &[("N", 3.0), ("alpha", 0.5)],
        description: "white noise plus the N-qubit GHZ state",
    },
    CatalogEntry {
        name: "state_A",
        parameters: &[("alpha", 0.5)],
        description: "three qubits, (I + alpha(XZX + YYY))/8, valid for alpha <= 1/sqrt(2)",
    },
    CatalogEntry {
        name: "bound_entangled",
        parameters: &[("a", 0.5), ("alpha", 0.2)],
        description: "2x4 bound entangled family mixed with white noise",
    },
];

pub fn catalog_entry(name: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Usage(format!("unknown catalog family {name:?}")))
}

fn integer_param(name: &str, value: f64) -> Result<usize> {
    if value.fract() != 0.0 || value < 0.0 {
        return Err(Error::ParameterRange {
            name: name.into(),
            value,
            range: "a non-negative integer".into(),
        });
    }
    Ok(value as usize)
}

impl CatalogEntry {
    /// Defaults overridden by `params`; unknown keys are rejected.
    pub fn resolve(&self, params: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
        let mut out: BTreeMap<String, f64> = self.parameters.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for (k, v) in params {
            match out.get_mut(k) {
                Some(slot) => *slot = *v,
                None => return Err(Error::Usage(format!("family {} has no parameter {k:?}", self.name))),
            }
        }
        Ok(out)
    }

    pub fn build(&self, params: &BTreeMap<String, f64>) -> Result<DensityMatrix> {
        let p = self.resolve(params)?;
        match self.name {
            "isotropic" => isotropic(integer_param("d", p["d"])?, p["alpha"]),
            "noisy_ghz" => noisy_ghz(integer_param("N", p["N"])?, p["alpha"]),
            "state_A" => state_a(p["alpha"]),
            "bound_entangled" => bound_entangled(p["a"], p["alpha"]),
            other => Err(Error::Usage(format!("unknown catalog family {other:?}"))),
        }
    }
}

/// Builds a catalog state by family name.
pub fn build(name: &str, params: &BTreeMap<String, f64>) -> Result<DensityMatrix> {
    catalog_entry(name)?.build(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{to_bloch, BasisConvention};

    fn comps(rho: &DensityMatrix) -> BTreeMap<String, f64> {
        to_bloch(rho, BasisConvention::Tilde)
            .unwrap()
            .nonzero()
            .filter(|(_, v)| v.abs() > 1e-12)
            .map(|(i, v)| (i.to_string(), v))
            .collect()
    }

    #[test]
    fn zero_alpha_is_maximally_mixed() {
        for rho in [isotropic(3, 0.0).unwrap(), noisy_ghz(3, 0.0).unwrap(), state_a(0.0).unwrap(), bound_entangled(0.3, 0.0).unwrap()] {
            let mm = DensityMatrix::maximally_mixed(rho.shape());
            assert!(rho.matrix().max_abs_diff(mm.matrix()) < 1e-15);
        }
    }

    #[test]
    fn ghz3_components() {
        let alpha = 0.3;
        let c = comps(&noisy_ghz(3, alpha).unwrap());
        let mut want = BTreeMap::new();
        for k in ["0,3,3", "3,0,3", "3,3,0", "1,1,1"] {
            want.insert(k.to_string(), alpha);
        }
        for k in ["1,2,2", "2,1,2", "2,2,1"] {
            want.insert(k.to_string(), -alpha);
        }
        assert_eq!(c.len(), 7);
        for (k, v) in &want {
            assert!((c[k] - v).abs() < 1e-14, "{k}");
        }
    }

    #[test]
    fn ghz4_has_fifteen_components() {
        let c = comps(&noisy_ghz(4, 0.2).unwrap());
        assert_eq!(c.len(), 15);
        assert!(c.values().all(|v| (v.abs() - 0.2).abs() < 1e-14));
    }

    #[test]
    fn isotropic_qubit_correlations() {
        let rho = isotropic(2, 0.4).unwrap();
        let b = to_bloch(&rho, BasisConvention::Tilde).unwrap();
        assert!((b.correlation_tensor().norm(1.0).unwrap() - 1.2).abs() < 1e-14);
        assert!(isotropic(1, 0.1).is_err());
        assert!(isotropic(2, 1.1).is_err());
    }

    #[test]
    fn state_a_range() {
        let rho = state_a(0.5f64.sqrt()).unwrap();
        assert!(rho.matrix().min_eigenvalue().unwrap() >= -1e-12);
        assert!(matches!(state_a(0.72), Err(Error::ParameterRange { .. })));
        let b = to_bloch(&state_a(0.4).unwrap(), BasisConvention::Tilde).unwrap();
        assert!((b.correlation_tensor().norm(1.0).unwrap() - 0.8).abs() < 1e-14);
    }

    #[test]
    fn bound_entangled_components() {
        for a in [0.0, 0.3, 0.77, 1.0] {
            let rho = bound_entangled(a, 1.0).unwrap().with_shape(SystemShape::qubits(3).unwrap()).unwrap();
            let c = comps(&rho);
            let s = 1.0 + 7.0 * a;
            let r = (1.0 - a * a).sqrt();
            let want: Vec<(&str, f64)> = vec![
                ("0,0,3", 1.0 - a),
                ("3,0,0", -(1.0 - a)),
                ("3,0,3", -(1.0 - a)),
                ("0,1,0", r),
                ("0,1,3", r),
                ("3,1,0", -r),
                ("3,1,3", -r),
                ("1,0,1", 4.0 * a),
                ("2,0,2", -4.0 * a),
                ("1,1,1", 2.0 * a),
                ("1,2,2", 2.0 * a),
                ("2,1,2", 2.0 * a),
                ("2,2,1", -2.0 * a),
            ];
            for (k, v) in &want {
                let got = c.get(*k).copied().unwrap_or(0.0);
                assert!((got - v / s).abs() < 1e-14, "a={a} {k}: {got} vs {}", v / s);
            }
            let nonzero = want.iter().filter(|(_, v)| v.abs() > 1e-12).count();
            assert_eq!(c.len(), nonzero, "a={a}: {c:?}");
        }
    }

    #[test]
    fn random_states_are_valid_and_reproducible() {
        let s = SystemShape::new(vec![2, 3]).unwrap();
        for kind in [RandomKind::Generic, RandomKind::ProductMixture] {
            let a = random_states(&s, kind, 11, 5).unwrap();
            let b = random_states(&s, kind, 11, 5).unwrap();
            assert_eq!(a, b);
            assert_ne!(a[0], a[1]);
        }
        assert!(random_states(&s, RandomKind::Generic, 1, 0).is_err());
    }

    #[test]
    fn registry() {
        let mut p = BTreeMap::new();
        p.insert("d".to_string(), 3.0);
        p.insert("alpha".to_string(), 0.2);
        assert_eq!(build("isotropic", &p).unwrap().dim(), 9);
        p.insert("N".to_string(), 3.0);
        assert!(build("isotropic", &p).is_err());
        assert!(build("werner", &BTreeMap::new()).is_err());
        let mut q = BTreeMap::new();
        q.insert("N".to_string(), 2.5);
        assert!(build("noisy_ghz", &q).is_err());
    }
}
