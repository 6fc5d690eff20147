//! Numerical thresholds shared by the verification routines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative out-of-window mass allowed when multiplying by `S`.
    pub leak: f64,
    /// Commutation residual at or below which `D±` are taken to commute.
    pub commuting: f64,
    /// Commutation residual at or above which they are taken not to.
    pub non_commuting: f64,
    /// Projection, spectrum and `AA*A = A` residuals in the dense algebra.
    pub projector: f64,
    /// `ĴĴ* = Q₋ + SQ₊S*` on probes.
    pub identity: f64,
    /// Semigroup-law residual for commuting systems.
    pub semigroup: f64,
    /// Relative `H²₊` mass of `S* f_{ζ,k}` below which `f_{ζ,k}` survives.
    pub survival: f64,
    /// `Z₊(t) f = e^{-itζ} f` on surviving vectors.
    pub eigen: f64,
    /// Rank cutoff on singular values of the resonance projector.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            leak: 1e-8,
            commuting: 1e-6,
            non_commuting: 1e-2,
            projector: 1e-6,
            identity: 1e-8,
            semigroup: 1e-6,
            survival: 1e-4,
            eigen: 1e-5,
            rank: 0.5,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("leak", self.leak),
            ("commuting", self.commuting),
            ("non_commuting", self.non_commuting),
            ("projector", self.projector),
            ("identity", self.identity),
            ("semigroup", self.semigroup),
            ("survival", self.survival),
            ("eigen", self.eigen),
            ("rank", self.rank),
        ];
        for (name, v) in all {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!(
                    "tolerance `{name}` must be positive, got {v}"
                )));
            }
        }
        if self.commuting >= self.non_commuting {
            return Err(Error::Config(
                "tolerance `commuting` must be below `non_commuting`".into(),
            ));
        }
        Ok(())
    }
}
