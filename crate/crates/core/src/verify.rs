//! Numerical certification of maps and witnesses.
//!
//! * [`cp_check`] — spectrum of the Choi matrix (exact up to eigensolver accuracy).
//! * [`positivity_scan`] — `min λ_min(φ(P))` over pure states `P`: Haar sampling
//!   followed by derivative-free descent on the unit sphere.
//! * [`block_positivity`] — `min <x⊗y|W|x⊗y>` by alternating eigenvector
//!   iteration with random restarts.
//! * [`ball_image_check`] — largest distance of `φ(ρ)` from the ball centre.
//!
//! Sampled certificates are evidence, not proofs. A `violated` certificate
//! carries the state that exhibits the violation and is a proof.
//!
//! Work is split into independent streams of one seed (sample chunk `c` or
//! restart `r` uses stream `c` / `r`), so results do not depend on how rayon
//! schedules them.

use std::cmp::Ordering;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball;
use crate::error::{Error, Result};
use crate::hermitian::{
    hermiticity_deviation, kron, matrix_unit, min_eigenpair, min_eigenvalue, CMatrix, CVector,
    HermitianMatrix, MatrixJson, SpectralState,
};
use crate::map::LinearMap;
use crate::sampling::{density_with, haar_vector, pure_state_with, stream_rng};

const CHUNK: usize = 1024;
const ALT_MAX_ITERS: usize = 200;
const ALT_CONVERGENCE: f64 = 1e-12;
const REFINE_START_STEP: f64 = 1e-2;
const REFINE_MIN_STEP: f64 = 1e-8;
const REFINE_MAX_SWEEPS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Eigenvalue sign threshold for CP and positivity decisions.
    pub eigen: f64,
    /// Threshold for block-positivity certificates.
    pub certificate: f64,
    /// Slack on the ball radius in image checks.
    pub ball: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { eigen: 1e-10, certificate: 1e-8, ball: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    #[serde(rename = "CP")]
    Cp,
    #[serde(rename = "not-CP")]
    NotCp,
    #[serde(rename = "positive-sampled")]
    PositiveSampled,
    #[serde(rename = "block-positive-sampled")]
    BlockPositiveSampled,
    #[serde(rename = "violated")]
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub bound: f64,
    pub samples: usize,
    pub restarts: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub violator: Option<MatrixJson>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        !matches!(self.kind, CertificateKind::NotCp | CertificateKind::Violated)
    }
}

/// `C = Σ_ij e_ij ⊗ φ(e_ij)`; `n` times `(id ⊗ φ)` of the maximally entangled projector.
pub fn choi_matrix(map: &dyn LinearMap) -> CMatrix {
    let n = map.dim();
    let mut out = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let e = matrix_unit(n, i, j);
            out += kron(&e, &map.apply(&e));
        }
    }
    out
}

pub fn cp_check(map: &dyn LinearMap, tol: &Tolerances) -> Result<Certificate> {
    let choi = choi_matrix(map);
    let deviation = hermiticity_deviation(&choi);
    if deviation > 1e-10 {
        return Err(Error::NotHermitian { deviation });
    }
    let (bound, v) = min_eigenpair(&HermitianMatrix::from_raw(choi).into_inner());
    let cp = bound >= -tol.eigen;
    Ok(Certificate {
        kind: if cp { CertificateKind::Cp } else { CertificateKind::NotCp },
        bound,
        samples: 0,
        restarts: 0,
        seed: 0,
        tolerance: tol.eigen,
        violator: (!cp).then(|| projector_json(&v)),
    })
}

fn projector_json(v: &CVector) -> MatrixJson {
    MatrixJson::from_matrix(&(v * v.adjoint()))
}

/// `λ_min(φ(|ψ><ψ|))`.
fn pure_image_min(map: &dyn LinearMap, psi: &CVector) -> f64 {
    let image = map.apply(&(psi * psi.adjoint()));
    min_eigenvalue(&HermitianMatrix::from_raw(image).into_inner())
}

#[derive(Clone)]
struct Candidate {
    value: f64,
    index: usize,
    psi: CVector,
}

fn by_value(a: &Candidate, b: &Candidate) -> Ordering {
    a.value.total_cmp(&b.value).then(a.index.cmp(&b.index))
}

/// Minimizes `λ_min(φ(P))` over pure `P`.
///
/// Phase one evaluates `samples` Haar-random pure states in chunks of 1024,
/// each chunk on its own RNG stream. Phase two refines the best `restarts`
/// of every chunk with Givens-rotation moves on the sphere, halving the step
/// from `1e−2` down to `1e−8` whenever a full sweep fails to improve.
pub fn positivity_scan(
    map: &dyn LinearMap,
    samples: usize,
    restarts: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Certificate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("positivity scan needs at least one sample".into()));
    }
    let n = map.dim();
    let chunks = samples.div_ceil(CHUNK);
    // Each chunk refines its own best `restarts` candidates, so adding whole
    // chunks or restarts only ever adds candidates: the bound is monotone.
    let best = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, chunk as u64);
            let len = CHUNK.min(samples - chunk * CHUNK);
            let mut pool: Vec<Candidate> = (0..len)
                .map(|k| {
                    let psi = haar_vector(&mut rng, n);
                    Candidate { value: pure_image_min(map, &psi), index: chunk * CHUNK + k, psi }
                })
                .collect();
            pool.sort_by(by_value);
            let sampled_best = pool[0].clone();
            pool.truncate(restarts);
            pool.into_iter()
                .map(|cand| {
                    let (value, psi) = refine_on_sphere(map, cand.psi, cand.value);
                    Candidate { value, index: cand.index, psi }
                })
                .chain(std::iter::once(sampled_best))
                .min_by(by_value)
                .expect("non-empty chunk")
        })
        .collect::<Vec<_>>()
        .into_iter()
        .min_by(by_value)
        .expect("at least one candidate");
    let violated = best.value < -tol.eigen;
    Ok(Certificate {
        kind: if violated { CertificateKind::Violated } else { CertificateKind::PositiveSampled },
        bound: best.value,
        samples,
        restarts,
        seed,
        tolerance: tol.eigen,
        violator: violated.then(|| projector_json(&best.psi)),
    })
}

#[derive(Clone, Copy)]
enum Move {
    Real(usize, usize),
    Imaginary(usize, usize),
    Phase(usize),
}

fn apply_move(psi: &CVector, mv: Move, theta: f64) -> CVector {
    let mut out = psi.clone();
    let (s, c) = theta.sin_cos();
    match mv {
        Move::Real(p, q) => {
            out[p] = psi[p] * c - psi[q] * s;
            out[q] = psi[p] * s + psi[q] * c;
        }
        Move::Imaginary(p, q) => {
            let is = Complex64::new(0.0, s);
            out[p] = psi[p] * c + psi[q] * is;
            out[q] = psi[p] * is + psi[q] * c;
        }
        Move::Phase(p) => {
            out[p] = psi[p] * Complex64::new(c, s);
        }
    }
    out
}

fn refine_on_sphere(map: &dyn LinearMap, mut psi: CVector, mut value: f64) -> (f64, CVector) {
    let n = psi.len();
    let mut moves = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            moves.push(Move::Real(p, q));
            moves.push(Move::Imaginary(p, q));
        }
    }
    moves.extend((1..n).map(Move::Phase));

    let mut step = REFINE_START_STEP;
    let mut sweeps = 0;
    while step >= REFINE_MIN_STEP && sweeps < REFINE_MAX_SWEEPS {
        sweeps += 1;
        let mut improved = false;
        for &mv in &moves {
            for theta in [step, -step] {
                let trial = apply_move(&psi, mv, theta);
                let v = pure_image_min(map, &trial);
                if v < value {
                    value = v;
                    psi = trial;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (value, psi)
}

/// Reduced operator on `B`: `M(x)_{kl} = Σ_ij conj(x_i) W_{(i,k),(j,l)} x_j`.
pub fn contract_first(w: &CMatrix, x: &CVector, dim_a: usize, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(dim_b, dim_b, |k, l| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..dim_a {
            for j in 0..dim_a {
                acc += x[i].conj() * w[(i * dim_b + k, j * dim_b + l)] * x[j];
            }
        }
        acc
    })
}

/// Reduced operator on `A`: `N(y)_{ij} = Σ_kl conj(y_k) W_{(i,k),(j,l)} y_l`.
pub fn contract_second(w: &CMatrix, y: &CVector, dim_a: usize, dim_b: usize) -> CMatrix {
    CMatrix::from_fn(dim_a, dim_a, |i, j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..dim_b {
            for l in 0..dim_b {
                acc += y[k].conj() * w[(i * dim_b + k, j * dim_b + l)] * y[l];
            }
        }
        acc
    })
}

/// `<x⊗y| W |x⊗y>` for unit `x`, `y`.
pub fn product_expectation(w: &CMatrix, x: &CVector, y: &CVector) -> f64 {
    let xy = x.kronecker(y);
    (xy.adjoint() * w * &xy)[(0, 0)].re
}

/// Result of one alternating minimization run.
#[derive(Debug, Clone)]
pub struct AlternatingRun {
    /// Objective after every half-step.
    pub history: Vec<f64>,
    pub x: CVector,
    pub y: CVector,
}

impl AlternatingRun {
    pub fn value(&self) -> f64 {
        *self.history.last().expect("at least one half-step")
    }
}

/// Alternates exact minimization over `y` (for fixed `x`) and over `x`
/// (for fixed `y`) until the value changes by less than `1e−12` or 200
/// iterations have run.
pub fn alternating_minimization(w: &CMatrix, dim_a: usize, dim_b: usize, x0: CVector) -> AlternatingRun {
    let mut x = x0;
    let mut y;
    let mut history = Vec::new();
    let mut previous = f64::INFINITY;
    let mut iter = 0;
    loop {
        let herm = |m: CMatrix| HermitianMatrix::from_raw(m).into_inner();
        let (vy, new_y) = min_eigenpair(&herm(contract_first(w, &x, dim_a, dim_b)));
        y = new_y;
        history.push(vy);
        let (vx, new_x) = min_eigenpair(&herm(contract_second(w, &y, dim_a, dim_b)));
        x = new_x;
        history.push(vx);
        iter += 1;
        if (previous - vx).abs() < ALT_CONVERGENCE || iter >= ALT_MAX_ITERS {
            break;
        }
        previous = vx;
    }
    AlternatingRun { history, x, y }
}

/// Minimizes `<x⊗y|W|x⊗y>` over unit product vectors from `restarts`
/// Haar-random starting points `x₀`.
pub fn block_positivity(
    w: &HermitianMatrix,
    dim_a: usize,
    dim_b: usize,
    restarts: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Certificate> {
    w.check_dim(dim_a * dim_b)?;
    if restarts == 0 {
        return Err(Error::InvalidArgument("block positivity needs at least one restart".into()));
    }
    let wm = w.as_matrix();
    let runs: Vec<(f64, usize, CVector, CVector)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r as u64);
            let run = alternating_minimization(wm, dim_a, dim_b, haar_vector(&mut rng, dim_a));
            (run.value(), r, run.x, run.y)
        })
        .collect();
    let (bound, _, x, y) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one restart");
    let violated = bound < -tol.certificate;
    Ok(Certificate {
        kind: if violated { CertificateKind::Violated } else { CertificateKind::BlockPositiveSampled },
        bound,
        samples: 0,
        restarts,
        seed,
        tolerance: tol.certificate,
        violator: violated.then(|| projector_json(&x.kronecker(&y))),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallImageReport {
    pub max_distance: f64,
    pub r_max: f64,
    pub certificate: Certificate,
}

/// Largest `‖ρ̃ − φ(ρ)‖` over `samples` random inputs, alternating pure and
/// Hilbert–Schmidt mixed states. Passes when it stays within `r_max`.
pub fn ball_image_check(
    map: &dyn LinearMap,
    state: &SpectralState,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<BallImageReport> {
    if map.dim() != state.dim() {
        return Err(Error::DimensionMismatch { expected: state.dim(), found: map.dim() });
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("ball image check needs at least one sample".into()));
    }
    let n = state.dim();
    let r_max = ball::r_max(state);
    let centre = state.density().as_matrix();
    let chunks = samples.div_ceil(CHUNK);
    let (max_distance, _, worst) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = stream_rng(seed, chunk as u64);
            let len = CHUNK.min(samples - chunk * CHUNK);
            (0..len)
                .map(|k| {
                    let index = chunk * CHUNK + k;
                    let rho = if index.is_multiple_of(2) { pure_state_with(&mut rng, n) } else { density_with(&mut rng, n) };
                    let d = (map.apply(rho.as_matrix()) - centre).norm();
                    (d, index, rho)
                })
                .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
                .expect("non-empty chunk")
        })
        .collect::<Vec<_>>()
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("at least one chunk");
    let violated = max_distance > r_max + tol.ball;
    Ok(BallImageReport {
        max_distance,
        r_max,
        certificate: Certificate {
            kind: if violated { CertificateKind::Violated } else { CertificateKind::PositiveSampled },
            bound: r_max - max_distance,
            samples,
            restarts: 0,
            seed,
            tolerance: tol.ball,
            violator: violated.then(|| MatrixJson::from(&worst)),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choi::ClassicChoiMap;
    use crate::map::{mu_max, BallMap, IdentityMap, TransposeMap};
    use crate::sampling::random_faithful_state;
    use crate::witness::maximally_entangled;

    #[test]
    fn identity_map_is_cp_with_choi_matrix_n_p_plus() {
        let cert = cp_check(&IdentityMap(3), &Tolerances::default()).unwrap();
        assert_eq!(cert.kind, CertificateKind::Cp);
        assert!(cert.bound.abs() < 1e-14);
        let c = choi_matrix(&IdentityMap(3));
        let expected = maximally_entangled(3).scale(3.0);
        assert!((c - expected.as_matrix()).norm() < 1e-14);
    }

    #[test]
    fn classic_choi_is_not_cp() {
        let cert = cp_check(&ClassicChoiMap, &Tolerances::default()).unwrap();
        assert_eq!(cert.kind, CertificateKind::NotCp);
        assert!((cert.bound + 0.5).abs() < 1e-10);
        assert!(cert.violator.is_some());
    }

    #[test]
    fn phi_mu_with_nonnegative_mu_is_cp() {
        let s = random_faithful_state(3, 4).unwrap();
        for mu in [0.0, 0.3, 1.0] {
            let cert = cp_check(&BallMap::phi(s.clone(), mu).unwrap(), &Tolerances::default()).unwrap();
            assert_eq!(cert.kind, CertificateKind::Cp, "mu = {mu}");
        }
    }

    #[test]
    fn strongly_negative_mu_is_caught() {
        let s = SpectralState::maximally_mixed(3).unwrap();
        let map = BallMap::phi(s, -1.0).unwrap();
        let cert = positivity_scan(&map, 2000, 5, 3, &Tolerances::default()).unwrap();
        assert_eq!(cert.kind, CertificateKind::Violated);
        // φ(P) = −P + 2I/3 has eigenvalue −1/3 for every pure P.
        assert!((cert.bound + 1.0 / 3.0).abs() < 1e-12);
        assert!(cert.violator.is_some());
    }

    #[test]
    fn transpose_is_positive_sampled() {
        let cert = positivity_scan(&TransposeMap(3), 2000, 5, 1, &Tolerances::default()).unwrap();
        assert_eq!(cert.kind, CertificateKind::PositiveSampled);
        assert!(cert.bound.abs() < 1e-10);
    }

    #[test]
    fn block_positivity_examples() {
        let tol = Tolerances::default();
        let neg = maximally_entangled(3).scale(-1.0);
        let cert = block_positivity(&neg, 3, 3, 20, 1, &tol).unwrap();
        assert_eq!(cert.kind, CertificateKind::Violated);
        assert!((cert.bound + 1.0 / 3.0).abs() < 1e-10);

        let id = HermitianMatrix::identity(9);
        let cert = block_positivity(&id, 3, 3, 5, 1, &tol).unwrap();
        assert!((cert.bound - 1.0).abs() < 1e-12);
        assert_eq!(cert.kind, CertificateKind::BlockPositiveSampled);
    }

    #[test]
    fn alternating_half_steps_never_increase() {
        let w = HermitianMatrix::from_raw(choi_matrix(&ClassicChoiMap));
        let mut rng = crate::sampling::seeded_rng(9);
        for _ in 0..20 {
            let run = alternating_minimization(w.as_matrix(), 3, 3, haar_vector(&mut rng, 3));
            for pair in run.history.windows(2) {
                assert!(pair[1] <= pair[0] + 1e-13, "{:?}", run.history);
            }
            let direct = product_expectation(w.as_matrix(), &run.x, &run.y);
            assert!((direct - run.value()).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_image_check_examples() {
        let tol = Tolerances::default();
        let s = random_faithful_state(3, 5).unwrap();
        let m = mu_max(&s);
        let at_bound = ball_image_check(&BallMap::phi(s.clone(), m).unwrap(), &s, 2000, 1, &tol).unwrap();
        assert_eq!(at_bound.certificate.kind, CertificateKind::PositiveSampled);
        assert!(at_bound.max_distance <= at_bound.r_max + 1e-12);

        let constant = ball_image_check(&BallMap::phi(s.clone(), 0.0).unwrap(), &s, 100, 1, &tol).unwrap();
        assert!(constant.max_distance < 1e-15);

        let doubled = ball_image_check(&BallMap::phi(s.clone(), 2.0 * m).unwrap(), &s, 2000, 1, &tol).unwrap();
        assert_eq!(doubled.certificate.kind, CertificateKind::Violated);
        assert!(doubled.max_distance > doubled.r_max);
    }

    #[test]
    fn certificates_are_deterministic() {
        let s = random_faithful_state(3, 6).unwrap();
        let map = BallMap::phi(s, 0.1).unwrap();
        let tol = Tolerances::default();
        let a = positivity_scan(&map, 3000, 4, 42, &tol).unwrap();
        let b = positivity_scan(&map, 3000, 4, 42, &tol).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn certificate_json_shape() {
        let cert = cp_check(&IdentityMap(2), &Tolerances::default()).unwrap();
        let v = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["kind"], "CP");
        assert!(v["violator"].is_null());
        for key in ["bound", "samples", "restarts", "seed"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
