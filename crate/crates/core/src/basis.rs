//! Generalized Gell-Mann basis of the traceless part of `H_n`, adapted to the
//! eigenbasis `{e_i}` of a state, and Bloch coordinates with respect to it.
//!
//! Elements are ordered `d_1 … d_{n−1}`, then `u_ij`, then `v_ij`, each
//! family in lexicographic `(i, j)` with `i < j`:
//!
//! ```text
//! d_l  = (e_11 + … + e_ll − l e_{l+1,l+1}) / sqrt(l(l+1))
//! u_ij = (e_ij + e_ji) / sqrt(2)
//! v_ij = (e_ij − e_ji) / (i sqrt(2))
//! ```
//!
//! Together with `f_{n²} = I/sqrt(n)` they are orthonormal in `tr(ab)`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::{c, trace_product, CMatrix, HermitianMatrix, SpectralState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisLabel {
    /// `d_l`, `l` counted from 1.
    Diagonal(usize),
    /// `u_ij`, zero-based `i < j`.
    Symmetric(usize, usize),
    /// `v_ij`, zero-based `i < j`.
    Antisymmetric(usize, usize),
}

#[derive(Debug, Clone)]
pub struct GellMannBasis {
    dim: usize,
    elements: Vec<HermitianMatrix>,
    labels: Vec<BasisLabel>,
}

/// Coordinates `a = I/n · trace_part + Σ_α coords_α f_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    pub trace_part: f64,
    pub coords: DVector<f64>,
}

impl GellMannBasis {
    /// Basis built on the computational basis vectors.
    pub fn standard(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("dimension must be at least 2".into()));
        }
        Ok(Self::in_frame(&CMatrix::identity(n, n)))
    }

    /// Basis built on the eigenvectors of `state` (in descending-eigenvalue order).
    pub fn adapted(state: &SpectralState) -> Self {
        Self::in_frame(state.eigenbasis())
    }

    fn in_frame(frame: &CMatrix) -> Self {
        let n = frame.nrows();
        let mut labels = Vec::with_capacity(n * n - 1);
        labels.extend((1..n).map(BasisLabel::Diagonal));
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        labels.extend(pairs.iter().map(|&(i, j)| BasisLabel::Symmetric(i, j)));
        labels.extend(pairs.iter().map(|&(i, j)| BasisLabel::Antisymmetric(i, j)));

        let elements = labels
            .iter()
            .map(|&label| {
                let local = standard_element(n, label);
                HermitianMatrix::from_raw(frame * local * frame.adjoint())
            })
            .collect();
        Self { dim: n, elements, labels }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n² − 1`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HermitianMatrix] {
        &self.elements
    }

    pub fn element(&self, alpha: usize) -> &HermitianMatrix {
        &self.elements[alpha]
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// `f_{n²} = I/sqrt(n)`.
    pub fn completion(&self) -> HermitianMatrix {
        HermitianMatrix::identity(self.dim).scale(1.0 / (self.dim as f64).sqrt())
    }

    pub fn to_bloch(&self, a: &HermitianMatrix) -> Result<BlochVector> {
        a.check_dim(self.dim)?;
        Ok(self.coordinates(a.as_matrix()))
    }

    /// Coordinates of a matrix assumed Hermitian.
    pub(crate) fn coordinates(&self, a: &CMatrix) -> BlochVector {
        let coords = DVector::from_iterator(
            self.len(),
            self.elements.iter().map(|f| trace_product(f.as_matrix(), a)),
        );
        BlochVector { trace_part: a.trace().re, coords }
    }

    pub fn from_bloch(&self, v: &BlochVector) -> Result<HermitianMatrix> {
        if v.coords.len() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: v.coords.len() });
        }
        Ok(HermitianMatrix::from_raw(self.combine(v.trace_part, &v.coords)))
    }

    /// `I/n · trace_part + Σ coords_α f_α` as a raw matrix.
    pub(crate) fn combine(&self, trace_part: f64, coords: &DVector<f64>) -> CMatrix {
        let n = self.dim;
        let mut acc = CMatrix::identity(n, n).scale(trace_part / n as f64);
        for (f, &x) in self.elements.iter().zip(coords.iter()) {
            if x != 0.0 {
                acc += f.as_matrix().scale(x);
            }
        }
        acc
    }
}

fn standard_element(n: usize, label: BasisLabel) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    let s2 = std::f64::consts::SQRT_2;
    match label {
        BasisLabel::Diagonal(l) => {
            let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
            for k in 0..l {
                m[(k, k)] = c(norm);
            }
            m[(l, l)] = c(-(l as f64) * norm);
        }
        BasisLabel::Symmetric(i, j) => {
            m[(i, j)] = c(1.0 / s2);
            m[(j, i)] = c(1.0 / s2);
        }
        BasisLabel::Antisymmetric(i, j) => {
            // (e_ij − e_ji) / (i √2) = −i/√2 e_ij + i/√2 e_ji
            m[(i, j)] = Complex64::new(0.0, -1.0 / s2);
            m[(j, i)] = Complex64::new(0.0, 1.0 / s2);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::hs_inner;

    #[test]
    fn element_count_is_n_squared_minus_one() {
        for n in 2..=6 {
            assert_eq!(GellMannBasis::standard(n).unwrap().len(), n * n - 1);
        }
    }

    #[test]
    fn qubit_reduction_is_pauli_over_root_two() {
        let b = GellMannBasis::standard(2).unwrap();
        let s = 1.0 / std::f64::consts::SQRT_2;
        let d1 = b.element(0).as_matrix();
        assert!((d1[(0, 0)].re - s).abs() < 1e-15 && (d1[(1, 1)].re + s).abs() < 1e-15);
        let u = b.element(1).as_matrix();
        assert!((u[(0, 1)].re - s).abs() < 1e-15 && u[(0, 1)].im == 0.0);
        // σ_y / √2 has (0,1) entry −i/√2.
        let v = b.element(2).as_matrix();
        assert!((v[(0, 1)].im + s).abs() < 1e-15 && (v[(1, 0)].im - s).abs() < 1e-15);
    }

    #[test]
    fn qutrit_cartan_elements() {
        let b = GellMannBasis::standard(3).unwrap();
        let d1 = b.element(0).as_matrix();
        let d2 = b.element(1).as_matrix();
        let s2 = 1.0 / 2f64.sqrt();
        let s6 = 1.0 / 6f64.sqrt();
        let expected1 = [s2, -s2, 0.0];
        let expected2 = [s6, s6, -2.0 * s6];
        for k in 0..3 {
            assert!((d1[(k, k)].re - expected1[k]).abs() < 1e-15);
            assert!((d2[(k, k)].re - expected2[k]).abs() < 1e-15);
        }
        assert_eq!(b.labels()[2], BasisLabel::Symmetric(0, 1));
        assert_eq!(b.labels()[5], BasisLabel::Antisymmetric(0, 1));
    }

    #[test]
    fn cartan_and_offdiagonal_are_orthogonal() {
        let b = GellMannBasis::standard(3).unwrap();
        assert!(hs_inner(b.element(0), b.element(2)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn orthonormal_for_small_dimensions() {
        for n in 2..=5 {
            let b = GellMannBasis::standard(n).unwrap();
            let mut all: Vec<HermitianMatrix> = b.elements().to_vec();
            all.push(b.completion());
            for (a, fa) in all.iter().enumerate() {
                if a + 1 < all.len() {
                    assert!(fa.trace().abs() < 1e-12);
                }
                for (bb, fb) in all.iter().enumerate() {
                    let expected = if a == bb { 1.0 } else { 0.0 };
                    assert!((hs_inner(fa, fb).unwrap() - expected).abs() < 1e-12, "n={n} {a} {bb}");
                }
            }
        }
    }

    #[test]
    fn maximally_mixed_has_zero_bloch_vector() {
        let b = GellMannBasis::standard(3).unwrap();
        let v = b.to_bloch(&HermitianMatrix::identity(3).scale(1.0 / 3.0)).unwrap();
        assert!((v.trace_part - 1.0).abs() < 1e-15);
        assert!(v.coords.norm() < 1e-15);
    }

    #[test]
    fn basis_elements_map_to_unit_vectors() {
        let b = GellMannBasis::standard(3).unwrap();
        for alpha in 0..b.len() {
            let v = b.to_bloch(b.element(alpha)).unwrap();
            assert!(v.trace_part.abs() < 1e-15);
            for (k, &x) in v.coords.iter().enumerate() {
                let expected = if k == alpha { 1.0 } else { 0.0 };
                assert!((x - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn bloch_norm_of_skewed_state() {
        let state = SpectralState::diagonal(&[0.5, 1.0 / 3.0, 1.0 / 6.0]).unwrap();
        let b = GellMannBasis::adapted(&state);
        let v = b.to_bloch(state.density()).unwrap();
        // tr ρ² − 1/3 = 1/4 + 1/9 + 1/36 − 1/3
        let expected = 0.25 + 1.0 / 9.0 + 1.0 / 36.0 - 1.0 / 3.0;
        assert!((v.coords.norm_squared() - expected).abs() < 1e-15);
        assert!((expected - 0.055_555_555_555_555_6).abs() < 1e-15);
    }

    #[test]
    fn from_bloch_rejects_wrong_length() {
        let b = GellMannBasis::standard(3).unwrap();
        let v = BlochVector { trace_part: 1.0, coords: DVector::zeros(3) };
        assert!(matches!(b.from_bloch(&v), Err(Error::DimensionMismatch { .. })));
        assert!(b.to_bloch(&HermitianMatrix::identity(2)).is_err());
    }
}
