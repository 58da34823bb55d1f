//! Entanglement witnesses `W = n (id ⊗ φ) P⁺_n = Σ_ij e_ij ⊗ φ(e_ij)`.
//!
//! Subsystem `A` carries the slow (block) index. `P⁺_n` is the projector onto
//! `Σ_i |ii>/sqrt(n)`.
//!
//! For the qutrit family the assembled witness is `μ_max` times a matrix with
//! diagonal blocks `(a_1, b_1, c_1)`, `(c_2, a_2, b_2)`, `(b_3, c_3, a_3)` and
//! `−1` linking `|11>`, `|22>`, `|33>`. The coefficients are read off the
//! assembled matrix.

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::choi::ChoiFamilyMap;
use crate::error::{Error, Result};
use crate::hermitian::{hermiticity_deviation, CMatrix, CVector, HermitianMatrix, MatrixJson, SpectralState};
use crate::map::LinearMap;
use crate::verify::{self, Certificate, Tolerances};

/// Threshold below which the minimum eigenvalue counts as negative.
pub const NEGATIVE_EIGEN_TOL: f64 = 1e-10;

const STATE_TOL: f64 = 1e-10;

/// `P⁺_n`.
pub fn maximally_entangled(n: usize) -> HermitianMatrix {
    let mut psi = CVector::zeros(n * n);
    for i in 0..n {
        psi[i * n + i] = crate::hermitian::c(1.0);
    }
    HermitianMatrix::projector(&psi).expect("non-zero vector")
}

#[derive(Debug, Clone)]
pub struct Witness {
    dim_a: usize,
    dim_b: usize,
    matrix: HermitianMatrix,
    min_eigenvalue: f64,
    block_positivity: Option<Certificate>,
    source: String,
}

impl Witness {
    /// `Σ_ij e_ij ⊗ φ(e_ij)`; fails when `φ` does not preserve Hermiticity.
    pub fn from_map(map: &dyn LinearMap) -> Result<Self> {
        let n = map.dim();
        let choi = verify::choi_matrix(map);
        let deviation = hermiticity_deviation(&choi);
        if deviation > 1e-10 {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::assemble(n, n, HermitianMatrix::from_raw(choi), map.describe()))
    }

    pub fn from_matrix(matrix: HermitianMatrix, dim_a: usize, dim_b: usize, source: impl Into<String>) -> Result<Self> {
        matrix.check_dim(dim_a * dim_b)?;
        Ok(Self::assemble(dim_a, dim_b, matrix, source.into()))
    }

    fn assemble(dim_a: usize, dim_b: usize, matrix: HermitianMatrix, source: String) -> Self {
        let min_eigenvalue = matrix.min_eigenvalue();
        Self { dim_a, dim_b, matrix, min_eigenvalue, block_positivity: None, source }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn block_positivity(&self) -> Option<&Certificate> {
        self.block_positivity.as_ref()
    }

    /// Lower bound on `<x⊗y|W|x⊗y>` found by the block-positivity scan, if run.
    pub fn block_positivity_lower_bound(&self) -> Option<f64> {
        self.block_positivity.as_ref().map(|c| c.bound)
    }

    /// Runs [`verify::block_positivity`] and stores the certificate.
    pub fn certify(&mut self, restarts: usize, seed: u64, tol: &Tolerances) -> Result<&Certificate> {
        let cert = verify::block_positivity(&self.matrix, self.dim_a, self.dim_b, restarts, seed, tol)?;
        Ok(self.block_positivity.insert(cert))
    }

    /// Negative eigenvalue present and block positivity (sampled) established.
    pub fn is_entanglement_witness(&self) -> bool {
        self.min_eigenvalue < -NEGATIVE_EIGEN_TOL
            && self.block_positivity_lower_bound().is_some_and(|b| b >= -1e-8)
    }

    /// `Tr(W ρ)`; negative values certify entanglement of `ρ` when `self` is a witness.
    pub fn detect(&self, rho: &HermitianMatrix) -> Result<f64> {
        rho.check_dim(self.dim_a * self.dim_b)?;
        let tr = rho.trace();
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::NotAState(format!("trace {tr} differs from 1")));
        }
        let min = rho.min_eigenvalue();
        if min < -STATE_TOL {
            return Err(Error::NotAState(format!("negative eigenvalue {min}")));
        }
        crate::hermitian::hs_inner(&self.matrix, rho)
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            matrix: MatrixJson::from(&self.matrix),
            min_eigenvalue: self.min_eigenvalue,
            block_positivity_lower_bound: self.block_positivity_lower_bound(),
            entanglement_witness: self.block_positivity.as_ref().map(|_| self.is_entanglement_witness()),
            source: self.source.clone(),
        }
    }

    /// Rebuilds from JSON; the minimum eigenvalue is recomputed and any stored
    /// block-positivity bound is discarded.
    pub fn from_json(json: &WitnessJson) -> Result<Self> {
        if json.matrix.dim != json.dim_a * json.dim_b {
            return Err(Error::DimensionMismatch { expected: json.dim_a * json.dim_b, found: json.matrix.dim });
        }
        Self::from_matrix(json.matrix.to_hermitian()?, json.dim_a, json.dim_b, json.source.clone())
    }
}

/// Serialized witness as emitted by `witness build`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub dim_a: usize,
    pub dim_b: usize,
    pub matrix: MatrixJson,
    pub min_eigenvalue: f64,
    #[serde(default)]
    pub block_positivity_lower_bound: Option<f64>,
    #[serde(default)]
    pub entanglement_witness: Option<bool>,
    #[serde(default)]
    pub source: String,
}

/// `a_i, b_i, c_i` of the qutrit family witness together with `μ_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub c: [f64; 3],
    pub mu_max: f64,
}

impl Coefficients {
    /// `a_i + b_{i+1} + c_{i+2}` (indices mod 3); each equals `1/μ_max`.
    pub fn cyclic_sums(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.a[i] + self.b[(i + 1) % 3] + self.c[(i + 2) % 3])
    }

    /// `[[a₁,−1,−1],[−1,a₂,−1],[−1,−1,a₃]]`.
    pub fn negativity_block(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.a[0], -1.0, -1.0, //
            -1.0, self.a[1], -1.0, //
            -1.0, -1.0, self.a[2],
        )
    }
}

/// Family map expressed in the eigenframe of `state` (the state replaced by
/// its diagonal form), so matrix units are the eigenbasis units `e_ij`.
fn eigenframe_family(state: &SpectralState, alpha: f64) -> Result<ChoiFamilyMap> {
    ChoiFamilyMap::new(SpectralState::diagonal(state.eigenvalues())?, alpha)
}

/// Witness of `φ_{μ_max}[α]` assembled in the eigenbasis of `state`.
pub fn family_witness(state: &SpectralState, alpha: f64) -> Result<Witness> {
    Witness::from_map(&eigenframe_family(state, alpha)?)
}

/// Reads `a_i`, `b_i`, `c_i` from the diagonal of the assembled witness:
/// block `i` holds `a_i` at position `i`, `b_i` at `i+1` and `c_i` at `i+2`
/// (mod 3), all scaled by `μ_max`.
pub fn coefficients(state: &SpectralState, alpha: f64) -> Result<Coefficients> {
    let family = eigenframe_family(state, alpha)?;
    let w = Witness::from_map(&family)?;
    Ok(coefficients_from_matrix(w.matrix().as_matrix(), family.mu_max()))
}

pub(crate) fn coefficients_from_matrix(w: &CMatrix, mu_max: f64) -> Coefficients {
    let entry = |block: usize, pos: usize| w[(block * 3 + pos % 3, block * 3 + pos % 3)].re / mu_max;
    Coefficients {
        a: std::array::from_fn(|i| entry(i, i)),
        b: std::array::from_fn(|i| entry(i, i + 1)),
        c: std::array::from_fn(|i| entry(i, i + 2)),
        mu_max,
    }
}

/// The 3×3 block on `|11>, |22>, |33>` (divided by `μ_max`) and whether it
/// has an eigenvalue below `−1e−10`, which is exactly when `W[α]` fails to be
/// positive semidefinite.
pub fn negativity_submatrix(state: &SpectralState, alpha: f64) -> Result<(Matrix3<f64>, bool)> {
    let block = coefficients(state, alpha)?.negativity_block();
    let min = block.symmetric_eigenvalues().min();
    Ok((block, min < -NEGATIVE_EIGEN_TOL))
}
