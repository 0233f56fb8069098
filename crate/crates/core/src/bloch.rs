//! Generalized Gell-Mann bases and the Bloch (vector) representation.
//!
//! A state on parties of dimensions `n_1..n_N` is written as
//! `rho = (1/n) (I + sum_alpha c_alpha B_alpha)` where every `B_alpha` is a
//! Kronecker product of convention-scaled local basis elements. Components are
//! stored in lexicographic order of the multi-index `(i_1, .., i_N)` with
//! `0 <= i_k < n_k^2`, skipping the all-zero index whose coefficient is
//! always 1.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, SystemShape};

/// Components with magnitude below this are stored as exact zeros, so that
/// sign-dependent logic never sees rounding noise.
pub const ZERO_TOL: f64 = 1e-12;

/// Largest imaginary residue tolerated in `Tr(rho B)` before the input is
/// rejected as inconsistent.
pub const IMAG_RESIDUE_TOL: f64 = 1e-8;

/// Normalization of the local basis `{B_0 = c_0 I, B_i = c_g lambda_i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BasisConvention {
    /// Identity plus `sqrt(n(n-1)/2) lambda_i`; pure local states have unit
    /// Bloch vectors.
    Tilde,
    /// Identity plus `sqrt(n/(2(n-1))) lambda_i`; every local vector of
    /// 2-norm at most 1 is a valid state.
    Check,
    /// `sqrt(n-1) I` plus `sqrt(n(n-1)/2) lambda_i`; the 2-norm of the
    /// vector is equivalent to purity.
    Prime,
}

impl BasisConvention {
    pub const ALL: [BasisConvention; 3] = [Self::Tilde, Self::Check, Self::Prime];

    /// Scale applied to the local identity (index 0).
    pub fn identity_scale(self, n: usize) -> f64 {
        match self {
            Self::Tilde | Self::Check => 1.0,
            Self::Prime => ((n - 1) as f64).sqrt(),
        }
    }

    /// Scale applied to each SU(n) generator.
    pub fn generator_scale(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            Self::Tilde | Self::Prime => (n * (n - 1.0) / 2.0).sqrt(),
            Self::Check => (n / (2.0 * (n - 1.0))).sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Tilde => "TILDE",
            Self::Check => "CHECK",
            Self::Prime => "PRIME",
        }
    }
}

impl fmt::Display for BasisConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TILDE" => Ok(Self::Tilde),
            "CHECK" => Ok(Self::Check),
            "PRIME" => Ok(Self::Prime),
            other => Err(Error::Usage(format!("unknown basis convention {other:?}"))),
        }
    }
}

/// Nonzero entries `(row, col, value)` of a small matrix.
pub(crate) type SparseEntries = Vec<(usize, usize, Complex64)>;

fn generator_entries(n: usize) -> Vec<SparseEntries> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in j + 1..n {
            out.push(vec![(j, k, one), (k, j, one)]);
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            out.push(vec![(j, k, -i), (k, j, i)]);
        }
    }
    for l in 1..n {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag: SparseEntries = (0..l).map(|m| (m, m, one * norm)).collect();
        diag.push((l, l, one * (-(l as f64) * norm)));
        out.push(diag);
    }
    out
}

fn dense(n: usize, entries: &SparseEntries) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for &(r, c, v) in entries {
        m[(r, c)] += v;
    }
    m
}

/// The `n^2 - 1` generalized Gell-Mann matrices of SU(n).
///
/// Ordering: symmetric off-diagonal pairs (row-major), antisymmetric pairs
/// (row-major), then diagonal generators of increasing rank. For `n = 2` this
/// is `(sigma_1, sigma_2, sigma_3)`.
pub fn generators(n: usize) -> Result<Vec<ComplexMatrix>> {
    if n < 2 {
        return Err(Error::Usage(format!("SU(n) generators need n >= 2, got {n}")));
    }
    Ok(generator_entries(n).iter().map(|e| dense(n, e)).collect())
}

/// Pauli matrix `sigma_i` with `sigma_0 = I`.
pub fn pauli(i: usize) -> ComplexMatrix {
    assert!(i < 4, "Pauli index {i} out of range");
    if i == 0 {
        ComplexMatrix::identity(2)
    } else {
        dense(2, &generator_entries(2)[i - 1])
    }
}

/// Scaled local basis for one party, index 0 being the identity.
#[derive(Debug)]
pub(crate) struct LocalBasis {
    pub elements: Vec<SparseEntries>,
    /// Tr(B_i^2) for each element.
    pub square_traces: Vec<f64>,
}

fn build_local_basis(n: usize, convention: BasisConvention) -> LocalBasis {
    let id_scale = convention.identity_scale(n);
    let gen_scale = convention.generator_scale(n);
    let mut elements = Vec::with_capacity(n * n);
    let mut square_traces = Vec::with_capacity(n * n);
    elements.push((0..n).map(|m| (m, m, Complex64::new(id_scale, 0.0))).collect());
    square_traces.push(id_scale * id_scale * n as f64);
    for g in generator_entries(n) {
        elements.push(g.into_iter().map(|(r, c, v)| (r, c, v * gen_scale)).collect());
        square_traces.push(2.0 * gen_scale * gen_scale);
    }
    LocalBasis {
        elements,
        square_traces,
    }
}

type BasisCache = RwLock<HashMap<(usize, BasisConvention), Arc<LocalBasis>>>;

pub(crate) fn local_basis(n: usize, convention: BasisConvention) -> Arc<LocalBasis> {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.read().expect("basis cache poisoned").get(&(n, convention)) {
        return Arc::clone(hit);
    }
    let mut guard = cache.write().expect("basis cache poisoned");
    Arc::clone(
        guard
            .entry((n, convention))
            .or_insert_with(|| Arc::new(build_local_basis(n, convention))),
    )
}

/// Dense local basis element `B_i` of one party.
pub fn local_element(n: usize, convention: BasisConvention, i: usize) -> Result<ComplexMatrix> {
    if n < 2 || i >= n * n {
        return Err(Error::IndexOutOfRange(format!("local index {i} for dimension {n}")));
    }
    Ok(dense(n, &local_basis(n, convention).elements[i]))
}

/// Calls `f(row, col, value)` for every nonzero entry of the Kronecker
/// product of sparse local factors.
pub(crate) fn for_each_kron_entry(
    locals: &[&SparseEntries],
    dims: &[usize],
    f: &mut impl FnMut(usize, usize, Complex64),
) {
    fn rec(
        k: usize,
        row: usize,
        col: usize,
        val: Complex64,
        locals: &[&SparseEntries],
        dims: &[usize],
        f: &mut impl FnMut(usize, usize, Complex64),
    ) {
        if k == locals.len() {
            f(row, col, val);
            return;
        }
        for &(r, c, v) in locals[k].iter() {
            rec(k + 1, row * dims[k] + r, col * dims[k] + c, val * v, locals, dims, f);
        }
    }
    rec(0, 0, 0, Complex64::new(1.0, 0.0), locals, dims, f);
}

/// Multi-index `(i_1, .., i_N)` with `0 <= i_k < n_k^2`.
///
/// Displays and parses as comma-joined decimals, e.g. `"0,3,3"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&i| i == 0)
    }

    pub fn active_parties(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &i)| i != 0).map(|(k, _)| k).collect()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Usage(format!("bad multi-index {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }
}

fn check_index(shape: &SystemShape, idx: &[usize]) -> Result<()> {
    if idx.len() != shape.parties() || idx.iter().zip(shape.dims()).any(|(&i, &d)| i >= d * d) {
        return Err(Error::IndexOutOfRange(format!(
            "multi-index {:?} for shape {shape}",
            idx
        )));
    }
    Ok(())
}

/// Radix value of a multi-index in base `n_k^2`; the all-zero index is 0.
fn radix_value(shape: &SystemShape, idx: &[usize]) -> usize {
    idx.iter().zip(shape.dims()).fold(0, |acc, (&i, &d)| acc * d * d + i)
}

fn radix_digits(shape: &SystemShape, mut value: usize) -> Vec<usize> {
    let mut out = vec![0; shape.parties()];
    for (k, &d) in shape.dims().iter().enumerate().rev() {
        out[k] = value % (d * d);
        value /= d * d;
    }
    out
}

/// Product basis element `B_idx` (the all-zero index is allowed).
pub fn basis_element(shape: &SystemShape, convention: BasisConvention, idx: &[usize]) -> Result<ComplexMatrix> {
    check_index(shape, idx)?;
    let bases: Vec<_> = shape.dims().iter().map(|&d| local_basis(d, convention)).collect();
    let locals: Vec<&SparseEntries> = bases.iter().zip(idx).map(|(b, &i)| &b.elements[i]).collect();
    let n = shape.total_dim();
    let mut m = ComplexMatrix::zeros(n, n);
    for_each_kron_entry(&locals, shape.dims(), &mut |r, c, v| m[(r, c)] += v);
    Ok(m)
}

/// Tr(B_idx^2) for the product basis element.
pub fn basis_square_trace(shape: &SystemShape, convention: BasisConvention, idx: &[usize]) -> f64 {
    shape
        .dims()
        .iter()
        .zip(idx)
        .map(|(&d, &i)| local_basis(d, convention).square_traces[i])
        .product()
}

/// Real Bloch components of a state over one basis convention.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    shape: SystemShape,
    convention: BasisConvention,
    components: Vec<f64>,
}

impl BlochVector {
    pub fn zeros(shape: &SystemShape, convention: BasisConvention) -> Self {
        Self {
            shape: shape.clone(),
            convention,
            components: vec![0.0; shape.bloch_len()],
        }
    }

    pub fn from_components(shape: &SystemShape, convention: BasisConvention, components: Vec<f64>) -> Result<Self> {
        if components.len() != shape.bloch_len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} components for shape {shape}", shape.bloch_len()),
                found: format!("{} components", components.len()),
            });
        }
        Ok(Self {
            shape: shape.clone(),
            convention,
            components,
        })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn convention(&self) -> BasisConvention {
        self.convention
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn position(&self, idx: &[usize]) -> Result<usize> {
        check_index(&self.shape, idx)?;
        radix_value(&self.shape, idx)
            .checked_sub(1)
            .ok_or_else(|| Error::IndexOutOfRange("the all-zero component is implicit".into()))
    }

    /// Component at `idx`; the implicit all-zero component is 1.
    ///
    /// Panics if the index does not fit the shape.
    pub fn get(&self, idx: &[usize]) -> f64 {
        check_index(&self.shape, idx).expect("multi-index out of range");
        match radix_value(&self.shape, idx) {
            0 => 1.0,
            v => self.components[v - 1],
        }
    }

    pub fn set(&mut self, idx: &[usize], value: f64) -> Result<()> {
        let pos = self.position(idx)?;
        self.components[pos] = value;
        Ok(())
    }

    pub fn index_at(&self, position: usize) -> MultiIndex {
        MultiIndex(radix_digits(&self.shape, position + 1))
    }

    /// All (index, value) pairs in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        self.components
            .iter()
            .enumerate()
            .map(move |(p, &v)| (self.index_at(p), v))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        self.iter().filter(|(_, v)| *v != 0.0)
    }

    /// Local Bloch vector `r_k`: components nonzero only at party `k`.
    pub fn local_vector(&self, party: usize) -> Vec<f64> {
        self.block(&[party])
    }

    /// Components whose nonzero positions are exactly `parties`, in
    /// lexicographic order; for a pure product state this is the tensor
    /// product of the corresponding local vectors.
    pub fn block(&self, parties: &[usize]) -> Vec<f64> {
        let dims = self.shape.dims();
        let mut out = Vec::new();
        let mut idx = vec![0usize; dims.len()];
        fn rec(pos: usize, parties: &[usize], dims: &[usize], idx: &mut Vec<usize>, b: &BlochVector, out: &mut Vec<f64>) {
            if pos == parties.len() {
                out.push(b.get(idx));
                return;
            }
            let k = parties[pos];
            for i in 1..dims[k] * dims[k] {
                idx[k] = i;
                rec(pos + 1, parties, dims, idx, b, out);
            }
            idx[k] = 0;
        }
        let mut sorted = parties.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        rec(0, &sorted, dims, &mut idx, self, &mut out);
        out
    }

    pub fn norm(&self, p: f64) -> Result<f64> {
        p_norm(&self.components, p)
    }

    pub fn l1_norm(&self) -> f64 {
        self.components.iter().map(|v| v.abs()).sum()
    }

    pub fn correlation_tensor(&self) -> CorrelationTensor {
        correlation_tensor(self)
    }

    /// Same component values relabelled to another convention. Only
    /// meaningful where the conventions coincide (all-qubit shapes).
    pub fn relabel(&self, convention: BasisConvention) -> Self {
        Self {
            convention,
            ..self.clone()
        }
    }
}

/// Components of a Hermitian matrix of unit trace; positivity is not checked.
pub fn bloch_of_matrix(mat: &ComplexMatrix, shape: &SystemShape, convention: BasisConvention) -> Result<BlochVector> {
    let n = shape.total_dim();
    if !mat.is_square() || mat.rows() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n}x{n} for shape {shape}"),
            found: format!("{}x{}", mat.rows(), mat.cols()),
        });
    }
    let dims = shape.dims();
    let bases: Vec<_> = dims.iter().map(|&d| local_basis(d, convention)).collect();
    let mut components = Vec::with_capacity(shape.bloch_len());
    for v in 1..=shape.bloch_len() {
        let idx = radix_digits(shape, v);
        let locals: Vec<&SparseEntries> = bases.iter().zip(&idx).map(|(b, &i)| &b.elements[i]).collect();
        let mut tr = Complex64::new(0.0, 0.0);
        for_each_kron_entry(&locals, dims, &mut |r, c, b| tr += b * mat[(c, r)]);
        let sq: f64 = bases.iter().zip(&idx).map(|(b, &i)| b.square_traces[i]).product();
        let value = tr * (n as f64 / sq);
        if value.im.abs() > IMAG_RESIDUE_TOL {
            return Err(Error::NumericalInconsistency(format!(
                "component {} has imaginary part {:e}",
                MultiIndex(idx),
                value.im
            )));
        }
        components.push(if value.re.abs() < ZERO_TOL { 0.0 } else { value.re });
    }
    Ok(BlochVector {
        shape: shape.clone(),
        convention,
        components,
    })
}

/// Bloch components `c_alpha = n Tr(rho B_alpha) / Tr(B_alpha^2)`.
pub fn to_bloch(rho: &DensityMatrix, convention: BasisConvention) -> Result<BlochVector> {
    bloch_of_matrix(rho.matrix(), rho.shape(), convention)
}

/// Rebuilds `(1/n)(I + sum c_alpha B_alpha)`. The result is Hermitian with
/// unit trace but is not guaranteed to be positive semidefinite.
pub fn from_bloch(b: &BlochVector) -> ComplexMatrix {
    let shape = &b.shape;
    let dims = shape.dims();
    let n = shape.total_dim();
    let bases: Vec<_> = dims.iter().map(|&d| local_basis(d, b.convention)).collect();
    let mut m = ComplexMatrix::identity(n);
    for (p, &c) in b.components.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let idx = radix_digits(shape, p + 1);
        let locals: Vec<&SparseEntries> = bases.iter().zip(&idx).map(|(basis, &i)| &basis.elements[i]).collect();
        for_each_kron_entry(&locals, dims, &mut |r, col, v| m[(r, col)] += v * c);
    }
    m.scale_real(1.0 / n as f64)
}

/// Components with every local index nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationTensor {
    shape: SystemShape,
    values: Vec<f64>,
}

impl CorrelationTensor {
    pub fn new(shape: &SystemShape, values: Vec<f64>) -> Result<Self> {
        if values.len() != shape.correlation_len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries for shape {shape}", shape.correlation_len()),
                found: format!("{} entries", values.len()),
            });
        }
        Ok(Self {
            shape: shape.clone(),
            values,
        })
    }

    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Local index ranges `m_k = n_k^2 - 1`.
    pub fn axis_lens(&self) -> Vec<usize> {
        self.shape.dims().iter().map(|d| d * d - 1).collect()
    }

    /// Multi-index (all entries >= 1) of a flat position.
    pub fn index_at(&self, mut position: usize) -> Vec<usize> {
        let lens = self.axis_lens();
        let mut out = vec![0; lens.len()];
        for (k, &m) in lens.iter().enumerate().rev() {
            out[k] = position % m + 1;
            position /= m;
        }
        out
    }

    pub fn position(&self, idx: &[usize]) -> Result<usize> {
        let lens = self.axis_lens();
        if idx.len() != lens.len() || idx.iter().zip(&lens).any(|(&i, &m)| i == 0 || i > m) {
            return Err(Error::IndexOutOfRange(format!(
                "correlation index {idx:?} for shape {}",
                self.shape
            )));
        }
        Ok(idx.iter().zip(&lens).fold(0, |acc, (&i, &m)| acc * m + (i - 1)))
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        Ok(self.values[self.position(idx)?])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.values.iter().enumerate().map(move |(p, &v)| (self.index_at(p), v))
    }

    pub fn norm(&self, p: f64) -> Result<f64> {
        p_norm(&self.values, p)
    }
}

pub fn correlation_tensor(b: &BlochVector) -> CorrelationTensor {
    let all: Vec<usize> = (0..b.shape.parties()).collect();
    CorrelationTensor {
        shape: b.shape.clone(),
        values: b.block(&all),
    }
}

/// `(sum |a_i|^p)^(1/p)`, or `max |a_i|` for `p = f64::INFINITY`.
pub fn p_norm(values: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidNorm(p));
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    if p == 1.0 {
        return Ok(values.iter().map(|v| v.abs()).sum());
    }
    if p == 2.0 {
        return Ok(values.iter().map(|v| v * v).sum::<f64>().sqrt());
    }
    Ok(values.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Purity expressed two ways: directly and through the PRIME-basis 2-norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PurityRelation {
    /// Tr(rho^2).
    pub lhs: f64,
    /// `(1 + prod(n_k - 1) ||rho'||_2^2) / prod n_k`.
    pub rhs: f64,
    /// `(1 + ||rho~||_2^2) / 2^N`, only for all-qubit shapes.
    pub qubit_rhs: Option<f64>,
}

pub fn purity_relation(rho: &DensityMatrix) -> Result<PurityRelation> {
    let shape = rho.shape();
    let n = shape.total_dim() as f64;
    let lhs = rho.purity();
    let prime = to_bloch(rho, BasisConvention::Prime)?;
    let weight: f64 = shape.dims().iter().map(|&d| (d - 1) as f64).product();
    let sq = prime.norm(2.0)?.powi(2);
    let rhs = (1.0 + weight * sq) / n;
    let qubit_rhs = if shape.is_all_qubits() {
        let tilde = to_bloch(rho, BasisConvention::Tilde)?;
        Some((1.0 + tilde.norm(2.0)?.powi(2)) / n)
    } else {
        None
    };
    Ok(PurityRelation { lhs, rhs, qubit_rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, validate_density};

    fn shape(d: &[usize]) -> SystemShape {
        SystemShape::new(d.to_vec()).unwrap()
    }

    #[test]
    fn qubit_generators_are_paulis() {
        let g = generators(2).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let s2 = ComplexMatrix::new(2, 2, vec![0.0.into(), -i, i, 0.0.into()]).unwrap();
        assert_eq!(g[0], ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap());
        assert_eq!(g[1], s2);
        assert_eq!(g[2], ComplexMatrix::diagonal(&[1.0, -1.0]));
        assert!(generators(1).is_err());
    }

    #[test]
    fn gell_mann_trace_orthonormality() {
        for n in 2..=5 {
            let g = generators(n).unwrap();
            assert_eq!(g.len(), n * n - 1);
            for (a, ga) in g.iter().enumerate() {
                assert!(ga.hermitian_deviation() < 1e-15);
                assert!(ga.trace().norm() < 1e-14);
                for (b, gb) in g.iter().enumerate() {
                    let t = ga.trace_of_product(gb);
                    let want = if a == b { 2.0 } else { 0.0 };
                    assert!((t - want).norm() < 1e-13, "n={n} ({a},{b}) -> {t}");
                }
            }
        }
    }

    #[test]
    fn basis_element_examples() {
        let s = shape(&[2, 2]);
        let b = basis_element(&s, BasisConvention::Tilde, &[3, 0]).unwrap();
        assert_eq!(b, kron(&[pauli(3), pauli(0)]).unwrap());

        let s3 = shape(&[3]);
        let l1 = generators(3).unwrap()[0].scale_real(3f64.sqrt());
        let b = basis_element(&s3, BasisConvention::Tilde, &[1]).unwrap();
        assert!(b.max_abs_diff(&l1) < 1e-15);

        let b = basis_element(&s3, BasisConvention::Prime, &[0]).unwrap();
        assert!(b.max_abs_diff(&ComplexMatrix::identity(3).scale_real(2f64.sqrt())) < 1e-15);

        assert!(basis_element(&s3, BasisConvention::Tilde, &[9]).is_err());
        assert!(basis_element(&s3, BasisConvention::Tilde, &[1, 1]).is_err());
    }

    #[test]
    fn qubit_conventions_coincide() {
        for conv in BasisConvention::ALL {
            for i in 0..4 {
                assert_eq!(local_element(2, conv, i).unwrap(), pauli(i));
            }
        }
    }

    #[test]
    fn product_basis_is_orthogonal() {
        for dims in [vec![2, 2], vec![3], vec![2, 3]] {
            let s = shape(&dims);
            for conv in BasisConvention::ALL {
                let mut elements = vec![basis_element(&s, conv, &vec![0; dims.len()]).unwrap()];
                let zero = BlochVector::zeros(&s, conv);
                for p in 0..s.bloch_len() {
                    elements.push(basis_element(&s, conv, zero.index_at(p).as_slice()).unwrap());
                }
                for (a, ea) in elements.iter().enumerate() {
                    for (b, eb) in elements.iter().enumerate().skip(a + 1) {
                        assert!(ea.trace_of_product(eb).norm() < 1e-12, "{dims:?} {conv} {a} {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn maximally_mixed_has_zero_vector() {
        let s = shape(&[2, 2]);
        let b = to_bloch(&DensityMatrix::maximally_mixed(&s), BasisConvention::Tilde).unwrap();
        assert!(b.components().iter().all(|&c| c == 0.0));
        assert_eq!(from_bloch(&b), ComplexMatrix::identity(4).scale_real(0.25));
    }

    #[test]
    fn single_qubit_pure_zero() {
        let s = shape(&[2]);
        let mut b = BlochVector::zeros(&s, BasisConvention::Tilde);
        b.set(&[3], 1.0).unwrap();
        assert_eq!(from_bloch(&b), ComplexMatrix::diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn bell_state_correlations() {
        // (I + X X - Y Y + Z Z)/4 is |phi+><phi+|; noise scales correlations by alpha
        let s = shape(&[2, 2]);
        let alpha = 0.4;
        let h = 0.5f64.sqrt();
        let v = [Complex64::new(h, 0.0), 0.0.into(), 0.0.into(), Complex64::new(h, 0.0)];
        let mut m = ComplexMatrix::identity(4).scale_real((1.0 - alpha) / 4.0);
        m.add_scaled(&ComplexMatrix::outer(&v), alpha);
        let rho = validate_density(m, &s, 1e-12).unwrap();
        let t = to_bloch(&rho, BasisConvention::Tilde).unwrap().correlation_tensor();
        let expected = [alpha, 0.0, 0.0, 0.0, -alpha, 0.0, 0.0, 0.0, alpha];
        for (a, b) in t.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn p_norm_basics() {
        assert_eq!(p_norm(&[3.0, 4.0], 2.0).unwrap(), 5.0);
        assert_eq!(p_norm(&[3.0, -4.0], f64::INFINITY).unwrap(), 4.0);
        assert_eq!(p_norm(&[3.0, -4.0], 1.0).unwrap(), 7.0);
        assert!(matches!(p_norm(&[1.0], 0.5), Err(Error::InvalidNorm(_))));
        assert!(p_norm(&[1.0], f64::NAN).is_err());
    }

    #[test]
    fn multi_index_text_round_trip() {
        let m: MultiIndex = "0,3,3".parse().unwrap();
        assert_eq!(m, MultiIndex(vec![0, 3, 3]));
        assert_eq!(m.to_string(), "0,3,3");
        assert!("0,x".parse::<MultiIndex>().is_err());
    }

    #[test]
    fn storage_order_is_lexicographic() {
        let s = shape(&[2, 3]);
        let b = BlochVector::zeros(&s, BasisConvention::Tilde);
        assert_eq!(b.components().len(), 4 * 9 - 1);
        assert_eq!(b.index_at(0), MultiIndex(vec![0, 1]));
        assert_eq!(b.index_at(7), MultiIndex(vec![0, 8]));
        assert_eq!(b.index_at(8), MultiIndex(vec![1, 0]));
        assert_eq!(b.position(&[3, 8]).unwrap(), 34);
        assert!(b.position(&[0, 0]).is_err());
        assert_eq!(b.get(&[0, 0]), 1.0);
    }

    #[test]
    fn correlation_indexing() {
        let s = shape(&[2, 3]);
        let t = CorrelationTensor::new(&s, (0..24).map(|v| v as f64).collect()).unwrap();
        assert_eq!(t.index_at(0), vec![1, 1]);
        assert_eq!(t.index_at(23), vec![3, 8]);
        assert_eq!(t.get(&[2, 1]).unwrap(), 8.0);
        assert!(t.get(&[0, 1]).is_err());
    }

    #[test]
    fn pure_qudit_purity_relation() {
        for n in 2..=4 {
            let s = shape(&[n]);
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[0] = Complex64::new(0.6, 0.0);
            v[n - 1] = Complex64::new(0.0, 0.8);
            let rho = validate_density(ComplexMatrix::outer(&v), &s, 1e-12).unwrap();
            let rel = purity_relation(&rho).unwrap();
            assert!((rel.lhs - 1.0).abs() < 1e-12);
            assert!((rel.lhs - rel.rhs).abs() < 1e-12);
            let prime = to_bloch(&rho, BasisConvention::Prime).unwrap();
            let want = (n as f64 - 1.0) / (n as f64 - 1.0);
            assert!((prime.norm(2.0).unwrap().powi(2) - want).abs() < 1e-12);
            let tilde = to_bloch(&rho, BasisConvention::Tilde).unwrap();
            assert!((tilde.norm(2.0).unwrap() - 1.0).abs() < 1e-12);
        }
        let mm = DensityMatrix::maximally_mixed(&shape(&[2, 2]));
        let rel = purity_relation(&mm).unwrap();
        assert!((rel.lhs - 0.25).abs() < 1e-15 && (rel.rhs - 0.25).abs() < 1e-15);
        assert!((rel.qubit_rhs.unwrap() - 0.25).abs() < 1e-15);
    }
}
