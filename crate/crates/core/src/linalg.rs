//! Dense complex matrices, subsystem shapes and validated density matrices.
//!
//! Storage is row-major. Sizes in scope (up to 8 qubits or a handful of
//! qudits) never need sparse storage, so everything here is dense except the
//! basis elements in [`crate::bloch`], which are enumerated entry by entry.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for density-matrix validation.
pub const DEFAULT_VALIDATION_TOL: f64 = 1e-9;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries for {rows}x{cols}", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C_ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C_ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from real row slices; handy in tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Usage("ragged rows".into()));
        }
        Ok(Self::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(*v, 0.0);
        }
        m
    }

    /// Projector |v><v| (no normalization is applied).
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |r, c| v[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_of_product(&self, other: &ComplexMatrix) -> Complex64 {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.rows, other.cols);
        let mut acc = C_ZERO;
        for r in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(r, k)] * other[(k, r)];
            }
        }
        acc
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// `self += factor * other`, in place.
    pub fn add_scaled(&mut self, other: &ComplexMatrix, factor: f64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * factor;
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == C_ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![C_ZERO; rows * cols];
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self[(ar, ac)];
                if a == C_ZERO {
                    continue;
                }
                for br in 0..other.rows {
                    let r = ar * other.rows + br;
                    for bc in 0..other.cols {
                        let c = ac * other.cols + bc;
                        data[r * cols + c] = a * other[(br, bc)];
                    }
                }
            }
        }
        Self { rows, cols, data }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise |A - A^H|.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order. The input must be Hermitian; only the
    /// Hermitian part is used, so callers should check hermiticity first.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch {
                expected: "square matrix".into(),
                found: format!("{}x{}", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let m = DMatrix::<Complex64>::from_fn(n, n, |r, c| (self[(r, c)] + self[(c, r)].conj()) * 0.5);
        let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?.first().copied().unwrap_or(0.0))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product of the factors in order.
pub fn kron(factors: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Usage("kron needs at least one factor".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, m| acc.kron(m)))
}

/// Local Hilbert-space dimensions of an N-partite system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SystemShape {
    dims: Vec<usize>,
}

impl SystemShape {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::UnsupportedShape("at least one party is required".into()));
        }
        if let Some(bad) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::UnsupportedShape(format!(
                "local dimension {bad} < 2 in {dims:?}"
            )));
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_all_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Number of stored Bloch components, (prod n_k^2) - 1.
    pub fn bloch_len(&self) -> usize {
        self.dims.iter().map(|d| d * d).product::<usize>() - 1
    }

    /// Number of correlation-tensor entries, prod (n_k^2 - 1).
    pub fn correlation_len(&self) -> usize {
        self.dims.iter().map(|d| d * d - 1).product()
    }

    /// Splits a flat computational-basis index into per-party digits.
    pub fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (k, &d) in self.dims.iter().enumerate().rev() {
            out[k] = flat % d;
            flat /= d;
        }
        out
    }

    pub fn flatten(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&i, &d)| acc * d + i)
    }
}

impl TryFrom<Vec<usize>> for SystemShape {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<SystemShape> for Vec<usize> {
    fn from(shape: SystemShape) -> Self {
        shape.dims
    }
}

impl fmt::Display for SystemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix on a [`SystemShape`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    shape: SystemShape,
    mat: ComplexMatrix,
    validation_tol: f64,
}

impl DensityMatrix {
    pub fn shape(&self) -> &SystemShape {
        &self.shape
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn validation_tol(&self) -> f64 {
        self.validation_tol
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// Reinterprets the same matrix under another factorization of its
    /// dimension, e.g. a 2x4 state read as three qubits.
    pub fn with_shape(&self, shape: SystemShape) -> Result<Self> {
        check_shape(&self.mat, &shape)?;
        Ok(Self {
            shape,
            mat: self.mat.clone(),
            validation_tol: self.validation_tol,
        })
    }

    pub fn maximally_mixed(shape: &SystemShape) -> Self {
        let n = shape.total_dim();
        Self {
            shape: shape.clone(),
            mat: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
            validation_tol: DEFAULT_VALIDATION_TOL,
        }
    }

    /// Tr(rho^2).
    pub fn purity(&self) -> f64 {
        self.mat.trace_of_product(&self.mat).re
    }
}

fn check_shape(mat: &ComplexMatrix, shape: &SystemShape) -> Result<()> {
    let n = shape.total_dim();
    if !mat.is_square() || mat.rows() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n}x{n} for shape {shape}"),
            found: format!("{}x{}", mat.rows(), mat.cols()),
        });
    }
    Ok(())
}

/// Checks the density-matrix invariants and wraps the matrix on success.
///
/// The first violated invariant is reported together with its magnitude.
pub fn validate_density(mat: ComplexMatrix, shape: &SystemShape, tol: f64) -> Result<DensityMatrix> {
    check_shape(&mat, shape)?;
    let deviation = mat.hermitian_deviation();
    if deviation > tol {
        return Err(Error::NonHermitian { deviation });
    }
    let trace = mat.trace();
    let trace_dev = (trace - C_ONE).norm();
    if trace_dev > tol {
        return Err(Error::TraceNotOne {
            trace: trace.re,
            deviation: trace_dev,
        });
    }
    let min_eigenvalue = mat.min_eigenvalue()?;
    if min_eigenvalue < -tol {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
    }
    Ok(DensityMatrix {
        shape: shape.clone(),
        mat,
        validation_tol: tol,
    })
}

/// Transposes the tensor indices of the listed parties (0-based).
pub fn partial_transpose(rho: &DensityMatrix, parties: &[usize]) -> Result<ComplexMatrix> {
    partial_transpose_matrix(rho.matrix(), rho.shape(), parties)
}

/// [`partial_transpose`] on a bare matrix.
pub fn partial_transpose_matrix(
    mat: &ComplexMatrix,
    shape: &SystemShape,
    parties: &[usize],
) -> Result<ComplexMatrix> {
    check_shape(mat, shape)?;
    let n_parties = shape.parties();
    let mut flip = vec![false; n_parties];
    for &p in parties {
        if p >= n_parties {
            return Err(Error::IndexOutOfRange(format!(
                "party {p} for a {n_parties}-party shape"
            )));
        }
        flip[p] = true;
    }
    let n = shape.total_dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        let rd = shape.digits(r);
        for c in 0..n {
            let cd = shape.digits(c);
            let mut nr = rd.clone();
            let mut nc = cd.clone();
            for k in 0..n_parties {
                if flip[k] {
                    nr[k] = cd[k];
                    nc[k] = rd[k];
                }
            }
            out[(shape.flatten(&nr), shape.flatten(&nc))] = mat[(r, c)];
        }
    }
    Ok(out)
}
