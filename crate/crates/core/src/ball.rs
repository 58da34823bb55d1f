//! The simplex `Σ(P)` spanned by the eigenprojectors of a faithful state and
//! the largest Hilbert–Schmidt ball around the state that it contains.
//!
//! With shifted weights `λ` (see [`SpectralState::shifted`]) the ball radius is
//! `r_max = λ_n / sqrt(n(n−1))`, and the ball touches the face `F_n`
//! (`p_n = 0`) at `α*_i = λ_i + λ_n/(n−1)`.

use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, SpectralState};

const SIMPLEX_TOL: f64 = 1e-10;

/// `r_max = λ_n / sqrt(n(n−1))`.
pub fn r_max(state: &SpectralState) -> f64 {
    let n = state.dim() as f64;
    state.lambda_n() / (n * (n - 1.0)).sqrt()
}

/// Point `α*` of `F_n` closest to the state, `α*_i = λ_i + λ_n/(n−1)`.
pub fn tangency_point(state: &SpectralState) -> Vec<f64> {
    let n = state.dim();
    let lambda = state.shifted();
    let lift = lambda[n - 1] / (n as f64 - 1.0);
    lambda[..n - 1].iter().map(|&l| l + lift).collect()
}

fn check_face_point(state: &SpectralState, alpha: &[f64]) -> Result<()> {
    let n = state.dim();
    if alpha.len() != n - 1 {
        return Err(Error::DimensionMismatch { expected: n - 1, found: alpha.len() });
    }
    let sum: f64 = alpha.iter().sum();
    if alpha.iter().any(|&a| a < -SIMPLEX_TOL) || (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::InvalidArgument(format!(
            "face coordinates must be non-negative and sum to 1 (sum {sum})"
        )));
    }
    Ok(())
}

/// `ρ_α = Σ_{i<n} α_i P_i`.
pub fn face_point(state: &SpectralState, alpha: &[f64]) -> Result<HermitianMatrix> {
    check_face_point(state, alpha)?;
    let mut acc = HermitianMatrix::zeros(state.dim());
    for (i, &a) in alpha.iter().enumerate() {
        acc = &acc + &state.projector(i).scale(a);
    }
    Ok(acc)
}

/// `D(α) = Σ_{i<n} (α_i − λ_i)² − λ_n²/n`, the squared distance from the
/// state to `ρ_α`.
pub fn face_distance(state: &SpectralState, alpha: &[f64]) -> Result<f64> {
    check_face_point(state, alpha)?;
    Ok(face_distance_unchecked(state, alpha))
}

pub(crate) fn face_distance_unchecked(state: &SpectralState, alpha: &[f64]) -> f64 {
    let n = state.dim();
    let lambda = state.shifted();
    let lambda_n = lambda[n - 1];
    alpha
        .iter()
        .zip(&lambda)
        .map(|(&a, &l)| (a - l) * (a - l))
        .sum::<f64>()
        - lambda_n * lambda_n / n as f64
}

/// `‖ρ̃ − x‖ ≤ r` up to `1e−12`.
pub fn ball_contains(state: &SpectralState, r: f64, x: &HermitianMatrix) -> Result<bool> {
    x.check_dim(state.dim())?;
    Ok((state.density() - x).hs_norm() <= r + 1e-12)
}

/// Unit trace and no eigenvalue below `−1e−10`.
pub fn in_simplex_psd(x: &HermitianMatrix) -> bool {
    (x.trace() - 1.0).abs() <= SIMPLEX_TOL && x.min_eigenvalue() >= -SIMPLEX_TOL
}

/// Membership in `Σ(P)` itself: `x` must be diagonal in the eigenbasis of
/// `state` with a probability vector on the diagonal.
pub fn in_simplex(state: &SpectralState, x: &HermitianMatrix) -> Result<bool> {
    x.check_dim(state.dim())?;
    let local = state.to_eigenframe(x.as_matrix());
    let n = state.dim();
    let mut off = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off = off.max(local[(i, j)].norm());
            }
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| local[(i, i)].re).collect();
    let sum: f64 = diag.iter().sum();
    Ok(off <= SIMPLEX_TOL && diag.iter().all(|&p| p >= -SIMPLEX_TOL) && (sum - 1.0).abs() <= SIMPLEX_TOL)
}

/// The maximal ball of a state together with its tangency data.
#[derive(Debug, Clone)]
pub struct SimplexBall {
    state: SpectralState,
    r_max: f64,
    tangency: Vec<f64>,
}

impl SimplexBall {
    pub fn new(state: SpectralState) -> Self {
        let r_max = r_max(&state);
        let tangency = tangency_point(&state);
        Self { state, r_max, tangency }
    }

    pub fn state(&self) -> &SpectralState {
        &self.state
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn tangency(&self) -> &[f64] {
        &self.tangency
    }

    /// `ρ_{α*}`, the touching point on `F_n`.
    pub fn tangency_state(&self) -> HermitianMatrix {
        face_point(&self.state, &self.tangency).expect("tangency point lies on the face")
    }

    pub fn contains(&self, x: &HermitianMatrix) -> Result<bool> {
        ball_contains(&self.state, self.r_max, x)
    }
}
