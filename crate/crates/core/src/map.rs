//! Positive trace-preserving maps built from the maximal ball of a faithful
//! state `ρ̃`.
//!
//! The basic contraction is `φ_μ(a) = μ a + (1 − μ) ρ̃ tr a`. For
//! `|μ| ≤ μ_max` it sends every state into `B(ρ̃, r_max)`, hence it is
//! positive. Any affine self-map `(T, t)` of the unit ball of `R^{n²−1}`
//! can then be applied to the Bloch vector shifted to the ball centre,
//! giving `φ_μ[T, t]`:
//!
//! ```text
//! φ_μ[T,t](a) = ρ̃ tr a + <f, T(a′ − x̃ tr a) + r_max t tr a>
//! ```
//!
//! where `a′` are the Bloch coordinates of `φ_μ(a)` and `x̃` those of `ρ̃`.
//! The translation is weighted by `tr a` so the map is linear; on states the
//! two readings coincide. Non-Hermitian inputs are handled by complex
//! linearity, `φ(a₁ + i a₂) = φ(a₁) + i φ(a₂)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::ball;
use crate::basis::GellMannBasis;
use crate::error::{Error, Result};
use crate::hermitian::{matrix_unit, CMatrix, HermitianMatrix, SpectralState};
use crate::sampling::{seeded_rng, unit_sphere_point};

/// Orthogonality and parameter-range tolerance.
pub const VALIDATION_TOL: f64 = 1e-10;

const BALL_CHECK_SAMPLES: usize = 10_000;
const BALL_CHECK_SEED: u64 = 0xBA11;

/// A linear map on `M_n(C)`.
pub trait LinearMap: Send + Sync {
    fn dim(&self) -> usize;

    fn apply(&self, a: &CMatrix) -> CMatrix;

    /// Image of a Hermitian matrix; only meaningful for Hermiticity-preserving maps.
    fn apply_hermitian(&self, a: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix::from_raw(self.apply(a.as_matrix()))
    }

    fn describe(&self) -> String;
}

/// Images `φ(e_ij)` of all matrix units, row-major in `(i, j)`.
pub fn basis_action(map: &dyn LinearMap) -> Vec<CMatrix> {
    let n = map.dim();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| map.apply(&matrix_unit(n, i, j)))
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityMap(pub usize);

impl LinearMap for IdentityMap {
    fn dim(&self) -> usize {
        self.0
    }
    fn apply(&self, a: &CMatrix) -> CMatrix {
        a.clone()
    }
    fn describe(&self) -> String {
        format!("identity on M_{}", self.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TransposeMap(pub usize);

impl LinearMap for TransposeMap {
    fn dim(&self) -> usize {
        self.0
    }
    fn apply(&self, a: &CMatrix) -> CMatrix {
        a.transpose()
    }
    fn describe(&self) -> String {
        format!("transpose on M_{}", self.0)
    }
}

/// Wraps a closure as a [`LinearMap`]; the closure must be linear.
pub struct FnMap<F> {
    dim: usize,
    name: String,
    f: F,
}

impl<F: Fn(&CMatrix) -> CMatrix + Send + Sync> FnMap<F> {
    pub fn new(dim: usize, name: impl Into<String>, f: F) -> Self {
        Self { dim, name: name.into(), f }
    }
}

impl<F: Fn(&CMatrix) -> CMatrix + Send + Sync> LinearMap for FnMap<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, a: &CMatrix) -> CMatrix {
        (self.f)(a)
    }
    fn describe(&self) -> String {
        self.name.clone()
    }
}

/// `μ_max = r_max / sqrt(1 + λ_1² + … + λ_{n−1}² − λ_n²/n)`.
pub fn mu_max(state: &SpectralState) -> f64 {
    let n = state.dim();
    let lambda = state.shifted();
    let lambda_n = lambda[n - 1];
    let sum_sq: f64 = lambda[..n - 1].iter().map(|l| l * l).sum();
    ball::r_max(state) / (1.0 + sum_sq - lambda_n * lambda_n / n as f64).sqrt()
}

/// `φ_μ(a) = μ a + (1 − μ) ρ̃ tr a`.
pub fn phi_mu(state: &SpectralState, mu: f64, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    a.check_dim(state.dim())?;
    Ok(&a.scale(mu) + &state.density().scale((1.0 - mu) * a.trace()))
}

/// An affine map `x ↦ T x + t` of `R^m` sending the closed unit ball into itself.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    linear: DMatrix<f64>,
    translation: DVector<f64>,
}

impl AffineMap {
    /// Validates ball preservation on 10⁴ deterministic unit vectors
    /// (the image of the ball is an ellipsoid, so the sphere suffices).
    pub fn new(linear: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        let m = translation.len();
        if linear.nrows() != m || linear.ncols() != m {
            return Err(Error::DimensionMismatch { expected: m, found: linear.nrows() });
        }
        let map = Self { linear, translation };
        let mut rng = seeded_rng(BALL_CHECK_SEED);
        let mut max_norm = map.translation.norm();
        for _ in 0..BALL_CHECK_SAMPLES {
            let x = unit_sphere_point(&mut rng, m);
            max_norm = max_norm.max(map.apply(&x).norm());
        }
        if max_norm > 1.0 + VALIDATION_TOL {
            return Err(Error::NotBallPreserving { max_norm });
        }
        Ok(map)
    }

    pub fn identity(m: usize) -> Self {
        Self { linear: DMatrix::identity(m, m), translation: DVector::zeros(m) }
    }

    /// Extreme point `T = R₁ Λ R₂`, `t = R₁ c` with
    /// `Λ = diag(s, …, s, s κ)`, `s = sqrt(1 − δ²(1 − κ²))` and
    /// `c = (0, …, 0, δ(1 − κ²))`. For `κ = 1` the value of `δ` is irrelevant
    /// and not range-checked.
    pub fn extremal(r1: &DMatrix<f64>, r2: &DMatrix<f64>, kappa: f64, delta: f64) -> Result<Self> {
        let m = r1.nrows();
        check_orthogonal(r1)?;
        check_orthogonal(r2)?;
        if r2.nrows() != m {
            return Err(Error::DimensionMismatch { expected: m, found: r2.nrows() });
        }
        if !(0.0..=1.0).contains(&kappa) {
            return Err(Error::InvalidArgument(format!("kappa must lie in [0, 1], got {kappa}")));
        }
        if kappa != 1.0 && !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidArgument(format!("delta must lie in (0, 1], got {delta}")));
        }
        let squeeze = 1.0 - kappa * kappa;
        let s = (1.0 - delta * delta * squeeze).max(0.0).sqrt();
        let mut diag = DVector::from_element(m, s);
        diag[m - 1] = s * kappa;
        let mut c = DVector::zeros(m);
        if kappa != 1.0 {
            c[m - 1] = delta * squeeze;
        }
        Ok(Self {
            linear: r1 * DMatrix::from_diagonal(&diag) * r2,
            translation: r1 * c,
        })
    }

    /// The rotation of `R^8` (qutrit Bloch space, basis order
    /// `d_1, d_2, u_12, u_13, u_23, v_12, v_13, v_23`) by `alpha` in the
    /// `(d_1, d_2)` plane combined with the reflection `x ↦ −x` on the
    /// off-diagonal coordinates.
    pub fn cartan_rotation(alpha: f64) -> Self {
        let mut t = -DMatrix::<f64>::identity(8, 8);
        let (s, c) = alpha.sin_cos();
        t[(0, 0)] = c;
        t[(0, 1)] = -s;
        t[(1, 0)] = s;
        t[(1, 1)] = c;
        Self { linear: t, translation: DVector::zeros(8) }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.linear
    }

    pub fn translation(&self) -> &DVector<f64> {
        &self.translation
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.linear * x + &self.translation
    }
}

fn check_orthogonal(r: &DMatrix<f64>) -> Result<()> {
    if r.nrows() != r.ncols() {
        return Err(Error::NotSquare { rows: r.nrows(), cols: r.ncols() });
    }
    let m = r.nrows();
    let deviation = (r.transpose() * r - DMatrix::<f64>::identity(m, m)).abs().max();
    if deviation > VALIDATION_TOL {
        return Err(Error::NotOrthogonal { deviation });
    }
    Ok(())
}

/// `φ_μ[T, t]` for a faithful state, evaluable on all of `M_n(C)`.
#[derive(Debug, Clone)]
pub struct BallMap {
    state: SpectralState,
    mu: f64,
    affine: AffineMap,
    basis: GellMannBasis,
    mu_max: f64,
    r_max: f64,
    x_tilde: DVector<f64>,
}

impl BallMap {
    /// Composes `φ_μ` with `affine`, which must act on `R^{n²−1}`.
    /// Any real `μ` is accepted; see [`Self::certified_positive`].
    pub fn compose(state: SpectralState, mu: f64, affine: AffineMap) -> Result<Self> {
        let n = state.dim();
        if affine.dim() != n * n - 1 {
            return Err(Error::DimensionMismatch { expected: n * n - 1, found: affine.dim() });
        }
        if !mu.is_finite() {
            return Err(Error::InvalidArgument(format!("mu must be finite, got {mu}")));
        }
        let basis = GellMannBasis::adapted(&state);
        let x_tilde = basis.coordinates(state.density().as_matrix()).coords;
        Ok(Self {
            mu_max: mu_max(&state),
            r_max: ball::r_max(&state),
            state,
            mu,
            affine,
            basis,
            x_tilde,
        })
    }

    /// `φ_μ` alone (identity affine part).
    pub fn phi(state: SpectralState, mu: f64) -> Result<Self> {
        let m = state.dim() * state.dim() - 1;
        Self::compose(state, mu, AffineMap::identity(m))
    }

    pub fn state(&self) -> &SpectralState {
        &self.state
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn mu_max(&self) -> f64 {
        self.mu_max
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn affine(&self) -> &AffineMap {
        &self.affine
    }

    pub fn basis(&self) -> &GellMannBasis {
        &self.basis
    }

    /// Bloch coordinates `x̃` of the invariant state.
    pub fn x_tilde(&self) -> &DVector<f64> {
        &self.x_tilde
    }

    /// Whether `|μ| ≤ μ_max`, the sufficient condition for positivity.
    /// A `false` value does not mean the map is not positive.
    pub fn certified_positive(&self) -> bool {
        self.mu.abs() <= self.mu_max * (1.0 + 1e-12)
    }

    fn apply_hermitian_raw(&self, a: &CMatrix) -> CMatrix {
        let bloch = self.basis.coordinates(a);
        let tr = bloch.trace_part;
        // a′ = Bloch coordinates of φ_μ(a)
        let a_prime = bloch.coords.scale(self.mu) + self.x_tilde.scale((1.0 - self.mu) * tr);
        let shifted = a_prime - self.x_tilde.scale(tr);
        let moved = self.affine.linear() * shifted + self.affine.translation().scale(self.r_max * tr);
        let mut out = self.state.density().as_matrix().scale(tr);
        for (f, &x) in self.basis.elements().iter().zip(moved.iter()) {
            out += f.as_matrix().scale(x);
        }
        out
    }
}

impl LinearMap for BallMap {
    fn dim(&self) -> usize {
        self.state.dim()
    }

    fn apply(&self, a: &CMatrix) -> CMatrix {
        let adj = a.adjoint();
        let re_part = (a + &adj).scale(0.5);
        let im_part = (a - &adj) * Complex64::new(0.0, -0.5);
        self.apply_hermitian_raw(&re_part) + self.apply_hermitian_raw(&im_part) * Complex64::i()
    }

    fn apply_hermitian(&self, a: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix::from_raw(self.apply_hermitian_raw(a.as_matrix()))
    }

    fn describe(&self) -> String {
        format!("ball map n={} mu={} (mu_max={})", self.dim(), self.mu, self.mu_max)
    }
}
