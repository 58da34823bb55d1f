//! Seeded samplers used by the verification engine and the tests.
//!
//! Every sampler is deterministic given its seed. Streams derived with
//! [`stream_rng`] let parallel workers draw independent, schedule-independent
//! sequences from one seed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::hermitian::{kron, CMatrix, CVector, HermitianMatrix, SpectralState};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Unit vector with Haar-distributed ray: a normalized vector of
/// independent standard complex Gaussians.
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > 1e-300 {
            return v.unscale(norm);
        }
    }
}

pub fn pure_state_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let v = haar_vector(rng, n);
    HermitianMatrix::from_raw(&v * v.adjoint())
}

/// `G G† / tr(G G†)` for an `n×n` complex Gaussian `G` (Hilbert–Schmidt measure).
pub fn density_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    HermitianMatrix::from_raw(gg.unscale(tr))
}

/// Uniform mixture of `terms` products of independent pure states.
pub fn separable_with<R: Rng + ?Sized>(
    rng: &mut R,
    dim_a: usize,
    dim_b: usize,
    terms: usize,
) -> HermitianMatrix {
    let d = dim_a * dim_b;
    let mut acc = CMatrix::zeros(d, d);
    for _ in 0..terms {
        let a = pure_state_with(rng, dim_a);
        let b = pure_state_with(rng, dim_b);
        acc += kron(a.as_matrix(), b.as_matrix());
    }
    HermitianMatrix::from_raw(acc.unscale(terms as f64))
}

/// GUE-like Hermitian matrix with unit-variance Gaussian entries.
pub fn hermitian_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    HermitianMatrix::from_raw(&g + g.adjoint())
}

pub fn random_pure(n: usize, seed: u64) -> Result<HermitianMatrix> {
    check_dim(n)?;
    Ok(pure_state_with(&mut seeded_rng(seed), n))
}

pub fn random_density(n: usize, seed: u64) -> Result<HermitianMatrix> {
    check_dim(n)?;
    Ok(density_with(&mut seeded_rng(seed), n))
}

pub fn random_separable(dim_a: usize, dim_b: usize, terms: usize, seed: u64) -> Result<HermitianMatrix> {
    check_dim(dim_a)?;
    check_dim(dim_b)?;
    if terms == 0 {
        return Err(Error::InvalidArgument("at least one product term is required".into()));
    }
    Ok(separable_with(&mut seeded_rng(seed), dim_a, dim_b, terms))
}

/// A Hilbert–Schmidt random state; faithful with probability one.
pub fn random_faithful_state(n: usize, seed: u64) -> Result<SpectralState> {
    SpectralState::new(&random_density(n, seed)?)
}

/// Haar-random orthogonal matrix: QR of a real Gaussian matrix with the
/// signs of `diag(R)` folded into `Q`.
pub fn orthogonal_with<R: Rng + ?Sized>(rng: &mut R, m: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(m, m, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub fn random_orthogonal(m: usize, seed: u64) -> DMatrix<f64> {
    orthogonal_with(&mut seeded_rng(seed), m)
}

/// Uniform point on the probability simplex with `k` vertices (Dirichlet(1,…,1)).
pub fn dirichlet_with<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= sum);
    w
}

/// Uniform point in the unit ball of `R^m`.
pub fn unit_ball_point<R: Rng + ?Sized>(rng: &mut R, m: usize) -> DVector<f64> {
    let dir = unit_sphere_point(rng, m);
    let u: f64 = rng.random();
    dir * u.powf(1.0 / m as f64)
}

pub fn unit_sphere_point<R: Rng + ?Sized>(rng: &mut R, m: usize) -> DVector<f64> {
    loop {
        let v: DVector<f64> = DVector::from_fn(m, |_, _| StandardNormal.sample(rng));
        let norm = v.norm();
        if norm > 1e-300 {
            return v / norm;
        }
    }
}

/// Transpose on the second tensor factor of a `(dim_a·dim_b)`-square matrix.
pub fn partial_transpose(m: &CMatrix, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    let d = dim_a * dim_b;
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: m.nrows() });
    }
    Ok(CMatrix::from_fn(d, d, |r, col| {
        let (i, k) = (r / dim_b, r % dim_b);
        let (j, l) = (col / dim_b, col % dim_b);
        m[(i * dim_b + l, j * dim_b + k)]
    }))
}
