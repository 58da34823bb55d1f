//! C ABI for `ballmap`.
//!
//! Objects are opaque heap handles created by `bm_*_new*` and released by the
//! matching `bm_*_free`. Every fallible call returns a [`BmStatus`]; on failure
//! `bm_last_error()` describes what went wrong on the calling thread.
//!
//! Matrices cross the boundary as row-major `n*n` arrays of doubles, real and
//! imaginary parts separately. A NULL imaginary input means "all zero"; a NULL
//! imaginary output is simply not written.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use ballmap::choi::{classic_choi, ChoiFamilyMap};
use ballmap::hermitian::{CMatrix, HermitianMatrix, SpectralState};
use ballmap::map::{mu_max, AffineMap, BallMap, LinearMap};
use ballmap::sampling::random_orthogonal;
use ballmap::verify::{self, Tolerances};
use ballmap::{ball, Error, Witness};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotHermitian = 4,
    NotAState = 5,
    NotFaithful = 6,
    NotBallPreserving = 7,
    Internal = 99,
}

/// Faithful state `ρ̃` together with its eigendecomposition.
pub struct BmState {
    inner: SpectralState,
}

/// Any linear map `M_n → M_n` built by this library.
pub struct BmMap {
    inner: Box<dyn LinearMap>,
}

/// Hermitian operator on `C^dA ⊗ C^dB`.
pub struct BmWitness {
    inner: Witness,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> BmStatus {
    match err {
        Error::DimensionMismatch { .. } | Error::NotSquare { .. } => BmStatus::DimensionMismatch,
        Error::NotHermitian { .. } => BmStatus::NotHermitian,
        Error::NotAState(_) => BmStatus::NotAState,
        Error::NotFaithful { .. } => BmStatus::NotFaithful,
        Error::NotBallPreserving { .. } | Error::NotOrthogonal { .. } => BmStatus::NotBallPreserving,
        Error::InvalidArgument(_) | Error::Config(_) | Error::Json(_) => BmStatus::InvalidArgument,
        Error::Io(_) => BmStatus::Internal,
    }
}

struct Fail(BmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(BmStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            BmStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            BmStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_matrix(n: usize, re: *const f64, im: *const f64) -> Result<CMatrix, Fail> {
    if re.is_null() {
        return Err(null("re"));
    }
    let re = slice::from_raw_parts(re, n * n);
    let im = (!im.is_null()).then(|| slice::from_raw_parts(im, n * n));
    Ok(CMatrix::from_fn(n, n, |i, j| {
        Complex64::new(re[i * n + j], im.map_or(0.0, |v| v[i * n + j]))
    }))
}

unsafe fn write_matrix(m: &CMatrix, re: *mut f64, im: *mut f64) -> Result<(), Fail> {
    if re.is_null() {
        return Err(null("re_out"));
    }
    let n = m.nrows();
    let re = slice::from_raw_parts_mut(re, n * n);
    for i in 0..n {
        for j in 0..n {
            re[i * n + j] = m[(i, j)].re;
        }
    }
    if !im.is_null() {
        let im = slice::from_raw_parts_mut(im, n * n);
        for i in 0..n {
            for j in 0..n {
                im[i * n + j] = m[(i, j)].im;
            }
        }
    }
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bm_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn bm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

// ---- states -------------------------------------------------------------

/// State with the given spectrum in the computational basis.
///
/// # Safety
/// `eigenvalues` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_state_new_diagonal(eigenvalues: *const f64, n: usize, out: *mut *mut BmState) -> BmStatus {
    guard(|| {
        if eigenvalues.is_null() {
            return Err(null("eigenvalues"));
        }
        let spec = slice::from_raw_parts(eigenvalues, n);
        let inner = SpectralState::diagonal(spec)?;
        write_out(out, boxed(BmState { inner }), "out")
    })
}

/// State from a full density matrix.
///
/// # Safety
/// `re` (and `im` unless NULL) must point to `n*n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_state_new_matrix(n: usize, re: *const f64, im: *const f64, out: *mut *mut BmState) -> BmStatus {
    guard(|| {
        let m = HermitianMatrix::new(read_matrix(n, re, im)?)?;
        let inner = SpectralState::new(&m)?;
        write_out(out, boxed(BmState { inner }), "out")
    })
}

/// `I/n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_state_new_maximally_mixed(n: usize, out: *mut *mut BmState) -> BmStatus {
    guard(|| {
        let inner = SpectralState::maximally_mixed(n)?;
        write_out(out, boxed(BmState { inner }), "out")
    })
}

/// # Safety
/// `state` must be NULL or a handle from `bm_state_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_state_free(state: *mut BmState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Matrix size `n`, or 0 for NULL.
///
/// # Safety
/// `state` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bm_state_dim(state: *const BmState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.dim())
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_state_r_max(state: *const BmState, out: *mut f64) -> BmStatus {
    guard(|| write_out(out, ball::r_max(&deref(state, "state")?.inner), "out"))
}

/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_state_mu_max(state: *const BmState, out: *mut f64) -> BmStatus {
    guard(|| write_out(out, mu_max(&deref(state, "state")?.inner), "out"))
}

/// Tangency point `α*` (the `n−1` free simplex coordinates).
///
/// # Safety
/// `state` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bm_state_tangency(state: *const BmState, out: *mut f64, len: usize) -> BmStatus {
    guard(|| {
        let s = &deref(state, "state")?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let alpha = ball::tangency_point(s);
        if len != alpha.len() {
            return Err(Error::DimensionMismatch { expected: alpha.len(), found: len }.into());
        }
        slice::from_raw_parts_mut(out, len).copy_from_slice(&alpha);
        Ok(())
    })
}

// ---- maps ---------------------------------------------------------------

/// `φ_μ(a) = μ a + (1−μ) ρ̃ tr a`.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_map_new_phi(state: *const BmState, mu: f64, out: *mut *mut BmMap) -> BmStatus {
    guard(|| {
        let s = deref(state, "state")?.inner.clone();
        let map = BallMap::phi(s, mu)?;
        write_out(out, boxed(BmMap { inner: Box::new(map) }), "out")
    })
}

/// `φ_μ[T,t]` with an extremal affine map built from two seeded random rotations.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_map_new_extremal(
    state: *const BmState,
    mu: f64,
    kappa: f64,
    delta: f64,
    r1_seed: u64,
    r2_seed: u64,
    out: *mut *mut BmMap,
) -> BmStatus {
    guard(|| {
        let s = deref(state, "state")?.inner.clone();
        let m = s.dim() * s.dim() - 1;
        let affine = AffineMap::extremal(&random_orthogonal(m, r1_seed), &random_orthogonal(m, r2_seed), kappa, delta)?;
        let map = BallMap::compose(s, mu, affine)?;
        write_out(out, boxed(BmMap { inner: Box::new(map) }), "out")
    })
}

/// Qutrit family at angle `alpha`; `state` must be 3×3.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_map_new_choi_family(state: *const BmState, alpha: f64, out: *mut *mut BmMap) -> BmStatus {
    guard(|| {
        let s = deref(state, "state")?.inner.clone();
        let map = ChoiFamilyMap::new(s, alpha)?;
        write_out(out, boxed(BmMap { inner: Box::new(map) }), "out")
    })
}

/// The classic Choi map on `M_3`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_map_new_classic_choi(out: *mut *mut BmMap) -> BmStatus {
    guard(|| write_out(out, boxed(BmMap { inner: Box::new(classic_choi()) }), "out"))
}

/// # Safety
/// `map` must be NULL or a handle from `bm_map_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_map_free(map: *mut BmMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// # Safety
/// `map` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bm_map_dim(map: *const BmMap) -> usize {
    map.as_ref().map_or(0, |m| m.inner.dim())
}

/// Applies the map to an `n×n` matrix.
///
/// # Safety
/// `map` must be a live handle; inputs must point to `n*n` readable doubles
/// (`im_in` may be NULL) and outputs to `n*n` writable ones (`im_out` may be NULL).
#[no_mangle]
pub unsafe extern "C" fn bm_map_apply(
    map: *const BmMap,
    re_in: *const f64,
    im_in: *const f64,
    re_out: *mut f64,
    im_out: *mut f64,
) -> BmStatus {
    guard(|| {
        let map = &deref(map, "map")?.inner;
        let a = read_matrix(map.dim(), re_in, im_in)?;
        write_matrix(&map.apply(&a), re_out, im_out)
    })
}

/// Smallest eigenvalue of the Choi matrix; negative iff the map is not CP.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_map_choi_min_eigenvalue(map: *const BmMap, out: *mut f64) -> BmStatus {
    guard(|| {
        let cert = verify::cp_check(deref(map, "map")?.inner.as_ref(), &Tolerances::default())?;
        write_out(out, cert.bound, "out")
    })
}

/// Sampled positivity scan; `out_bound` receives the smallest eigenvalue found.
///
/// # Safety
/// `map` must be a live handle; `out_bound` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_map_positivity_scan(
    map: *const BmMap,
    samples: usize,
    restarts: usize,
    seed: u64,
    out_bound: *mut f64,
) -> BmStatus {
    guard(|| {
        let map = deref(map, "map")?.inner.as_ref();
        let cert = verify::positivity_scan(map, samples, restarts, seed, &Tolerances::default())?;
        write_out(out_bound, cert.bound, "out_bound")
    })
}

// ---- witnesses ----------------------------------------------------------

/// `W = Σ_ij e_ij ⊗ φ(e_ij)`.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_witness_from_map(map: *const BmMap, out: *mut *mut BmWitness) -> BmStatus {
    guard(|| {
        let w = Witness::from_map(deref(map, "map")?.inner.as_ref())?;
        write_out(out, boxed(BmWitness { inner: w }), "out")
    })
}

/// # Safety
/// `w` must be NULL or a handle from `bm_witness_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bm_witness_free(w: *mut BmWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Total dimension `dA·dB`, or 0 for NULL.
///
/// # Safety
/// `w` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bm_witness_dim(w: *const BmWitness) -> usize {
    w.as_ref().map_or(0, |w| w.inner.dim_a() * w.inner.dim_b())
}

/// Copies the operator out as row-major `N×N`, `N = bm_witness_dim(w)`.
///
/// # Safety
/// `w` must be a live handle; `re` must point to `N*N` writable doubles, `im` likewise or NULL.
#[no_mangle]
pub unsafe extern "C" fn bm_witness_matrix(w: *const BmWitness, re: *mut f64, im: *mut f64) -> BmStatus {
    guard(|| write_matrix(deref(w, "witness")?.inner.matrix().as_matrix(), re, im))
}

/// # Safety
/// `w` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_witness_min_eigenvalue(w: *const BmWitness, out: *mut f64) -> BmStatus {
    guard(|| write_out(out, deref(w, "witness")?.inner.min_eigenvalue(), "out"))
}

/// `Tr(W ρ)` for a density matrix `ρ`.
///
/// # Safety
/// `w` must be a live handle; `re` (and `im` unless NULL) must point to `N*N` doubles.
#[no_mangle]
pub unsafe extern "C" fn bm_witness_detect(w: *const BmWitness, re: *const f64, im: *const f64, out: *mut f64) -> BmStatus {
    guard(|| {
        let w = &deref(w, "witness")?.inner;
        let n = w.dim_a() * w.dim_b();
        let rho = HermitianMatrix::new(read_matrix(n, re, im)?)?;
        write_out(out, w.detect(&rho)?, "out")
    })
}

/// Alternating product-vector minimization. `out_bound` receives the lowest
/// `<x⊗y|W|x⊗y>` found; `out_block_positive` whether it stayed above the
/// certificate tolerance. The result is cached on the handle.
///
/// # Safety
/// `w` must be a live handle not used concurrently; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn bm_witness_block_positivity(
    w: *mut BmWitness,
    restarts: usize,
    seed: u64,
    out_bound: *mut f64,
    out_block_positive: *mut bool,
) -> BmStatus {
    guard(|| {
        let w = w.as_mut().ok_or_else(|| null("witness"))?;
        let cert = w.inner.certify(restarts, seed, &Tolerances::default())?;
        let (bound, passed) = (cert.bound, cert.passed());
        write_out(out_bound, bound, "out_bound")?;
        write_out(out_block_positive, passed, "out_block_positive")
    })
}

/// Negative eigenvalue plus block positivity found by the last
/// `bm_witness_block_positivity` call.
///
/// # Safety
/// `w` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bm_witness_is_entanglement_witness(w: *const BmWitness) -> bool {
    w.as_ref().is_some_and(|w| w.inner.is_entanglement_witness())
}
