//! Positive trace-preserving maps on `M_n(C)` built from balls of density
//! matrices centred at a faithful state, the entanglement witnesses they
//! induce through the Choi–Jamiołkowski construction, and a numerical engine
//! that certifies (complete) positivity and block positivity.
//!
//! The crate is organised bottom-up:
//!
//! * [`hermitian`] — Hermitian matrices, faithful spectral states, matrix JSON.
//! * [`basis`] — generalized Gell-Mann basis adapted to an eigenbasis, Bloch coordinates.
//! * [`sampling`] — seeded samplers for pure, mixed and separable states.
//! * [`ball`] — the eigen-simplex of a state and its maximal inscribed ball.
//! * [`map`] — `φ_μ`, the bound `μ_max`, extremal affine maps and their composition.
//! * [`choi`] — the closed-form three-level family and the classic Choi map.
//! * [`witness`] — witnesses `W = n (id ⊗ φ) P⁺` and their coefficient structure.
//! * [`verify`] — CP checks, positivity and block-positivity scans, ball image checks.
//! * [`config`] / [`cli`] — JSON configuration and the command-line front end.

pub mod ball;
pub mod basis;
pub mod choi;
pub mod cli;
pub mod config;
pub mod error;
pub mod hermitian;
pub mod map;
pub mod sampling;
pub mod verify;
pub mod witness;

pub use ball::SimplexBall;
pub use basis::{BlochVector, GellMannBasis};
pub use choi::{ChoiFamilyMap, ClassicChoiMap};
pub use error::{Error, Result};
pub use hermitian::{CMatrix, HermitianMatrix, MatrixJson, SpectralState};
pub use map::{AffineMap, BallMap, LinearMap};
pub use verify::{Certificate, CertificateKind, Tolerances};
pub use witness::Witness;
