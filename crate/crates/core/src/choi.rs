//! Closed form of `φ_{μ_max}[α]` for qutrits, where the affine part is the
//! rotation by `α` in the Cartan plane `(d_1, d_2)` combined with the
//! reflection of every off-diagonal coordinate.
//!
//! In the eigenbasis of `ρ̃` the map acts as
//!
//! ```text
//! e_ii ↦ Σ_j Λ_ji e_jj,      e_ij ↦ −μ_max e_ij  (i ≠ j)
//! ```
//!
//! with `Λ = μ_max Λ⁰ + Λ¹`, `Λ⁰` the circulant matrix with first row
//! `(η₁, η₂, η₃)` and `Λ¹` the matrix whose `i`-th row is constant `ξ_i`.
//! Columns of `Λ` sum to one, which is exactly trace preservation of the
//! action above. At `ρ̃ = I/3` and `α = π/3` the map is the classic Choi map.

use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::hermitian::{c, CMatrix, SpectralState};
use crate::map::{mu_max, LinearMap};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// `(η₁, η₂, η₃)` at angle `alpha` (radians).
pub fn eta(alpha: f64) -> [f64; 3] {
    let (s, c) = alpha.sin_cos();
    [
        2.0 / 3.0 * c,
        -(c + SQRT_3 * s) / 3.0,
        (-c + SQRT_3 * s) / 3.0,
    ]
}

/// The state-independent circulant `Λ⁰(α)`.
pub fn universal_circulant(alpha: f64) -> Matrix3<f64> {
    let [e1, e2, e3] = eta(alpha);
    Matrix3::new(e1, e2, e3, e3, e1, e2, e2, e3, e1)
}

fn check_qutrit(state: &SpectralState) -> Result<()> {
    if state.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: state.dim() });
    }
    Ok(())
}

/// `(ξ₁, ξ₂, ξ₃)`; they sum to one.
pub fn xi(state: &SpectralState, alpha: f64) -> Result<[f64; 3]> {
    check_qutrit(state)?;
    let lam = state.shifted();
    let m = mu_max(state);
    let [e1, e2, e3] = eta(alpha);
    let third = lam[2] / 3.0;
    Ok([
        lam[0] + third - m * (lam[0] * e1 + lam[1] * e2),
        lam[1] + third - m * (lam[0] * e3 + lam[1] * e1),
        third - m * (lam[0] * e2 + lam[1] * e3),
    ])
}

/// `Λ = μ_max Λ⁰ + Λ¹`.
pub fn lambda_matrix(state: &SpectralState, alpha: f64) -> Result<Matrix3<f64>> {
    let xi = xi(state, alpha)?;
    let m = mu_max(state);
    let rows = Matrix3::from_fn(|i, _| xi[i]);
    Ok(universal_circulant(alpha) * m + rows)
}

/// `Λ^Choi = ½ [[1,1,0],[0,1,1],[1,0,1]]`.
pub fn choi_lambda() -> Matrix3<f64> {
    Matrix3::new(1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0) * 0.5
}

/// Angle at which `φ_{μ_max}[α]` with `ρ̃ = I/3` is the classic Choi map.
///
/// Note that [`lambda_matrix`] itself equals [`choi_lambda`] at `−π/3`: the
/// diagonal action uses `Λᵀ`.
pub fn choi_angle() -> f64 {
    PI / 3.0
}

/// Diagonal action `e_ii ↦ Σ_j D_ij e_jj` with off-diagonal factor `off`,
/// evaluated in the frame of `state` (or the computational frame when `None`).
fn act(diag: &Matrix3<f64>, off: f64, frame: Option<&SpectralState>, a: &CMatrix) -> CMatrix {
    let local = match frame {
        Some(s) => s.to_eigenframe(a),
        None => a.clone(),
    };
    let mut out = local.scale(off);
    for j in 0..3 {
        out[(j, j)] = c(0.0);
        for i in 0..3 {
            out[(j, j)] += local[(i, i)] * diag[(i, j)];
        }
    }
    match frame {
        Some(s) => s.from_eigenframe(&out),
        None => out,
    }
}

/// `φ_{μ_max}[α]` in closed form.
#[derive(Debug, Clone)]
pub struct ChoiFamilyMap {
    state: SpectralState,
    alpha: f64,
    mu_max: f64,
    eta: [f64; 3],
    xi: [f64; 3],
    lambda: Matrix3<f64>,
}

impl ChoiFamilyMap {
    pub fn new(state: SpectralState, alpha: f64) -> Result<Self> {
        let xi = xi(&state, alpha)?;
        let lambda = lambda_matrix(&state, alpha)?;
        Ok(Self { mu_max: mu_max(&state), eta: eta(alpha), state, alpha, xi, lambda })
    }

    pub fn state(&self) -> &SpectralState {
        &self.state
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mu_max(&self) -> f64 {
        self.mu_max
    }

    pub fn eta(&self) -> [f64; 3] {
        self.eta
    }

    pub fn xi(&self) -> [f64; 3] {
        self.xi
    }

    /// `Λ` as defined by `η` and `ξ`.
    pub fn lambda(&self) -> &Matrix3<f64> {
        &self.lambda
    }

    /// `D` with `φ(e_ii) = Σ_j D_ij e_jj`; equals `Λᵀ`.
    pub fn action_matrix(&self) -> Matrix3<f64> {
        self.lambda.transpose()
    }
}

impl LinearMap for ChoiFamilyMap {
    fn dim(&self) -> usize {
        3
    }

    fn apply(&self, a: &CMatrix) -> CMatrix {
        act(&self.action_matrix(), -self.mu_max, Some(&self.state), a)
    }

    fn describe(&self) -> String {
        format!("qutrit family alpha={} mu_max={}", self.alpha, self.mu_max)
    }
}

/// The classic Choi map on `M_3(C)`:
/// `e_ii ↦ Σ_j Λ^Choi_ij e_jj`, `e_ij ↦ −½ e_ij`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassicChoiMap;

impl LinearMap for ClassicChoiMap {
    fn dim(&self) -> usize {
        3
    }

    fn apply(&self, a: &CMatrix) -> CMatrix {
        act(&choi_lambda(), -0.5, None, a)
    }

    fn describe(&self) -> String {
        "classic Choi map".to_string()
    }
}

pub fn classic_choi() -> ClassicChoiMap {
    ClassicChoiMap
}
