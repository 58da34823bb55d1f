//! The real Hilbert space `H_n` of Hermitian matrices with the
//! Hilbert–Schmidt scalar product `(a, b) = tr(ab)`, faithful states in
//! spectral form, and the row-major matrix JSON format.

use std::ops::{Add, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest tolerated `|a_ij - conj(a_ji)|` before construction refuses to symmetrize.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues at or below this are not accepted as strictly positive.
pub const FAITHFUL_TOL: f64 = 1e-14;

const TRACE_TOL: f64 = 1e-10;

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `max_ij |a_ij - conj(a_ji)|`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Smallest eigenvalue and a unit eigenvector for it.
pub fn min_eigenpair(m: &CMatrix) -> (f64, CVector) {
    let eig = SymmetricEigen::new(m.clone());
    let (k, value) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty matrix");
    (value, eig.eigenvectors.column(k).into_owned())
}

/// Kronecker product `a ⊗ b`, with `a` carrying the slow index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Matrix unit `e_ij = |i><j|`.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = c(1.0);
    m
}

/// Real part of `tr(ab)`; exact for Hermitian `a`, `b`.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (a[(i, j)], b[(j, i)]);
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// An element of `H_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMatrix,
}

impl HermitianMatrix {
    /// Symmetrizes `(m + m†)/2` after checking `m` is Hermitian to within
    /// [`HERMITICITY_TOL`] (relative to the largest entry when that exceeds 1).
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        if m.nrows() < 2 {
            return Err(Error::InvalidArgument(format!(
                "dimension must be at least 2, got {}",
                m.nrows()
            )));
        }
        let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
        let deviation = hermiticity_deviation(&m);
        if deviation > HERMITICITY_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::from_raw(m))
    }

    /// Symmetrizes without the deviation guard; for matrices that are Hermitian
    /// by construction up to rounding.
    pub(crate) fn from_raw(m: CMatrix) -> Self {
        let adj = m.adjoint();
        Self { inner: (m + adj).scale(0.5) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::new(CMatrix::from_fn(n, n, |i, j| if i == j { c(diag[i]) } else { c(0.0) }))
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: CMatrix::identity(n, n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { inner: CMatrix::zeros(n, n) }
    }

    /// Rank-one projector onto the ray of `v` (normalized internally).
    pub fn projector(v: &CVector) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidArgument("zero vector has no projector".into()));
        }
        let u = v.unscale(norm);
        Ok(Self::from_raw(&u * u.adjoint()))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_inner(self) -> CMatrix {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace().re
    }

    /// Hilbert–Schmidt norm `sqrt(tr a²)`.
    pub fn hs_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { inner: self.inner.scale(s) }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.inner).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.inner)
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.dim() });
        }
        Ok(())
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { inner: &self.inner + &rhs.inner }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { inner: &self.inner - &rhs.inner }
    }
}

/// Hilbert–Schmidt scalar product `tr(ab)`.
pub fn hs_inner(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    b.check_dim(a.dim())?;
    Ok(trace_product(&a.inner, &b.inner))
}

/// A faithful density matrix `ρ̃ = Σ λ̃_i P_i` with `λ̃_1 ≥ … ≥ λ̃_n > 0`.
///
/// Besides the spectrum the state exposes the shifted weights
/// `λ_i = λ̃_i − λ̃_n` (`i < n`) and `λ_n = n λ̃_n`, for which
/// `ρ̃ = Σ_{i<n} λ_i P_i + λ_n I/n`.
#[derive(Debug, Clone)]
pub struct SpectralState {
    eigenvalues: Vec<f64>,
    eigenbasis: CMatrix,
    density: HermitianMatrix,
}

impl SpectralState {
    /// Decomposes `rho`. Degenerate eigenvalues keep whatever orthonormal
    /// eigenvectors the eigensolver returns.
    pub fn new(rho: &HermitianMatrix) -> Result<Self> {
        let trace = rho.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotAState(format!("trace {trace} differs from 1")));
        }
        let (mut values, vectors) = eigh(rho.as_matrix());
        values.reverse();
        let n = rho.dim();
        let basis = CMatrix::from_fn(n, n, |r, col| vectors[(r, n - 1 - col)]);
        Self::check_faithful(&values)?;
        Ok(Self { eigenvalues: values, eigenbasis: basis, density: rho.clone() })
    }

    /// Builds `Σ λ̃_i |u_i><u_i|` from a spectrum and the unitary whose columns
    /// are the eigenvectors. Entries are re-sorted descending together with
    /// their columns.
    pub fn from_spectrum(eigenvalues: &[f64], unitary: &CMatrix) -> Result<Self> {
        let n = eigenvalues.len();
        if unitary.nrows() != n || unitary.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: unitary.nrows() });
        }
        if n < 2 {
            return Err(Error::InvalidArgument("dimension must be at least 2".into()));
        }
        let deviation = (unitary.adjoint() * unitary - CMatrix::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "eigenbasis is not unitary (deviation {deviation:e})"
            )));
        }
        let sum: f64 = eigenvalues.iter().sum();
        if (sum - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotAState(format!("eigenvalues sum to {sum}")));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
        let values: Vec<f64> = order.iter().map(|&k| eigenvalues[k]).collect();
        Self::check_faithful(&values)?;
        let basis = CMatrix::from_fn(n, n, |r, col| unitary[(r, order[col])]);
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(n, values.iter().map(|&v| c(v))));
        let density = HermitianMatrix::from_raw(&basis * diag * basis.adjoint());
        Ok(Self { eigenvalues: values, eigenbasis: basis, density })
    }

    /// `diag(λ̃)` in the computational basis.
    pub fn diagonal(eigenvalues: &[f64]) -> Result<Self> {
        let n = eigenvalues.len();
        Self::from_spectrum(eigenvalues, &CMatrix::identity(n, n))
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("dimension must be at least 2".into()));
        }
        Self::diagonal(&vec![1.0 / n as f64; n])
    }

    fn check_faithful(values: &[f64]) -> Result<()> {
        let min = *values.last().expect("non-empty spectrum");
        if min <= FAITHFUL_TOL {
            return Err(Error::NotFaithful { min_eigenvalue: min });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `λ̃_1 ≥ … ≥ λ̃_n`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `(λ_1, …, λ_{n−1}, λ_n)` with `λ_i = λ̃_i − λ̃_n` and `λ_n = n λ̃_n`.
    pub fn shifted(&self) -> Vec<f64> {
        let n = self.dim();
        let last = self.eigenvalues[n - 1];
        let mut out: Vec<f64> = self.eigenvalues[..n - 1].iter().map(|&l| l - last).collect();
        out.push(n as f64 * last);
        out
    }

    /// `λ_n = n λ̃_n`.
    pub fn lambda_n(&self) -> f64 {
        self.dim() as f64 * self.eigenvalues[self.dim() - 1]
    }

    /// Columns are the eigenvectors `e_i`, ordered with the spectrum.
    pub fn eigenbasis(&self) -> &CMatrix {
        &self.eigenbasis
    }

    pub fn eigenvector(&self, i: usize) -> CVector {
        self.eigenbasis.column(i).into_owned()
    }

    /// `P_i = |e_i><e_i|`.
    pub fn projector(&self, i: usize) -> HermitianMatrix {
        let v = self.eigenvector(i);
        HermitianMatrix::from_raw(&v * v.adjoint())
    }

    pub fn projectors(&self) -> Vec<HermitianMatrix> {
        (0..self.dim()).map(|i| self.projector(i)).collect()
    }

    pub fn density(&self) -> &HermitianMatrix {
        &self.density
    }

    /// `Σ_{i<n} λ_i P_i + λ_n I/n`.
    pub fn shifted_reconstruction(&self) -> HermitianMatrix {
        let n = self.dim();
        let lambda = self.shifted();
        let mut acc = HermitianMatrix::identity(n).scale(lambda[n - 1] / n as f64);
        for (i, &l) in lambda[..n - 1].iter().enumerate() {
            acc = &acc + &self.projector(i).scale(l);
        }
        acc
    }

    /// Expresses `m` in the eigenbasis: `U† m U`.
    pub fn to_eigenframe(&self, m: &CMatrix) -> CMatrix {
        self.eigenbasis.adjoint() * m * &self.eigenbasis
    }

    /// Inverse of [`Self::to_eigenframe`].
    pub fn from_eigenframe(&self, m: &CMatrix) -> CMatrix {
        &self.eigenbasis * m * self.eigenbasis.adjoint()
    }
}

/// `{"dim": n, "re": [[…]], "im": [[…]]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let re = (0..n).map(|i| (0..n).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..n).map(|i| (0..n).map(|j| m[(i, j)].im).collect()).collect();
        Self { dim: n, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == n && rows.iter().all(|r| r.len() == n);
        if !rows_ok(&self.re) {
            return Err(Error::Config(format!("\"re\" must be {n}x{n}")));
        }
        if !self.im.is_empty() && !rows_ok(&self.im) {
            return Err(Error::Config(format!("\"im\" must be {n}x{n} or omitted")));
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            let im = if self.im.is_empty() { 0.0 } else { self.im[i][j] };
            Complex64::new(self.re[i][j], im)
        }))
    }

    /// Parses and validates Hermiticity.
    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_matrix()?)
    }
}

impl From<&HermitianMatrix> for MatrixJson {
    fn from(h: &HermitianMatrix) -> Self {
        Self::from_matrix(h.as_matrix())
    }
}
