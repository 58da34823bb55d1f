//! JSON configuration for maps.
//!
//! ```json
//! {"dim": 3,
//!  "state": "maximally_mixed" | {"dim": n, "re": [[…]], "im": [[…]]},
//!  "mu": 0.1 | "max" | "-max",
//!  "affine": {"kind": "identity"}
//!          | {"kind": "extremal", "kappa": …, "delta": …, "r1_seed": …, "r2_seed": …}
//!          | {"kind": "rotation_alpha", "alpha": …}}
//! ```
//!
//! `dim` only matters for the named state and defaults to 3. Unknown keys are
//! rejected.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{MatrixJson, SpectralState};
use crate::map::{mu_max, AffineMap, BallMap};
use crate::sampling::random_orthogonal;

pub const DEFAULT_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    MaximallyMixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Named(NamedState),
    Matrix(MatrixJson),
}

impl StateSpec {
    pub fn resolve(&self, dim: Option<usize>) -> Result<SpectralState> {
        match self {
            StateSpec::Named(NamedState::MaximallyMixed) => {
                SpectralState::maximally_mixed(dim.unwrap_or(DEFAULT_DIM))
            }
            StateSpec::Matrix(m) => {
                if let Some(d) = dim {
                    if d != m.dim {
                        return Err(Error::DimensionMismatch { expected: d, found: m.dim });
                    }
                }
                SpectralState::new(&m.to_hermitian()?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedMu {
    #[serde(rename = "max")]
    Max,
    #[serde(rename = "-max")]
    NegMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSpec {
    Value(f64),
    Named(NamedMu),
}

impl MuSpec {
    pub fn resolve(&self, state: &SpectralState) -> f64 {
        match *self {
            MuSpec::Value(v) => v,
            MuSpec::Named(NamedMu::Max) => mu_max(state),
            MuSpec::Named(NamedMu::NegMax) => -mu_max(state),
        }
    }

    /// Parses `max`, `-max` or a number.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(MuSpec::Named(NamedMu::Max)),
            "-max" => Ok(MuSpec::Named(NamedMu::NegMax)),
            other => other
                .parse::<f64>()
                .map(MuSpec::Value)
                .map_err(|_| Error::Config(format!("mu must be a number, \"max\" or \"-max\", got {other:?}"))),
        }
    }
}

// `Identity {}` rather than a unit variant: serde ignores `deny_unknown_fields`
// on unit variants of internally tagged enums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AffineSpec {
    Identity {},
    Extremal {
        kappa: f64,
        delta: f64,
        r1_seed: u64,
        r2_seed: u64,
    },
    RotationAlpha {
        alpha: f64,
    },
}

impl Default for AffineSpec {
    fn default() -> Self {
        AffineSpec::Identity {}
    }
}

impl AffineSpec {
    pub fn build(&self, n: usize) -> Result<AffineMap> {
        let m = n * n - 1;
        match *self {
            AffineSpec::Identity {} => Ok(AffineMap::identity(m)),
            AffineSpec::Extremal { kappa, delta, r1_seed, r2_seed } => {
                AffineMap::extremal(&random_orthogonal(m, r1_seed), &random_orthogonal(m, r2_seed), kappa, delta)
            }
            AffineSpec::RotationAlpha { alpha } => {
                if n != 3 {
                    return Err(Error::Config(format!("rotation_alpha requires dim 3, got {n}")));
                }
                Ok(AffineMap::cartan_rotation(alpha))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub state: StateSpec,
    pub mu: MuSpec,
    #[serde(default)]
    pub affine: AffineSpec,
}

impl MapConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build(&self) -> Result<BallMap> {
        let state = self.state.resolve(self.dim)?;
        let mu = self.mu.resolve(&state);
        let affine = self.affine.build(state.dim())?;
        BallMap::compose(state, mu, affine)
    }
}
