use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerKind {
    /// Uniformly random query order.
    Passive,
    /// Explore sample, then a fixed ordering by distance to the explored positives.
    Offline,
    /// Explore sample, then greedily the unlabeled point nearest to any found positive.
    ExploreCommit,
    /// Explore sample, then uniform draws from the union of balls around found positives.
    Ucb,
    /// Queries the true positive support first, in index order.
    OracleGreedy,
    /// Queries the true positive support first, in uniformly random order.
    OracleUniform,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 6] = [
        LearnerKind::Passive,
        LearnerKind::Offline,
        LearnerKind::ExploreCommit,
        LearnerKind::Ucb,
        LearnerKind::OracleGreedy,
        LearnerKind::OracleUniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Passive => "passive",
            LearnerKind::Offline => "offline",
            LearnerKind::ExploreCommit => "explore-commit",
            LearnerKind::Ucb => "ucb",
            LearnerKind::OracleGreedy => "oracle-greedy",
            LearnerKind::OracleUniform => "oracle-uniform",
        }
    }

    /// Kinds that start with a uniform sample of `m` queries.
    pub fn has_explore_phase(self) -> bool {
        matches!(
            self,
            LearnerKind::Offline | LearnerKind::ExploreCommit | LearnerKind::Ucb
        )
    }

    /// Kinds that read ground-truth support membership.
    pub fn is_oracle(self) -> bool {
        matches!(self, LearnerKind::OracleGreedy | LearnerKind::OracleUniform)
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LearnerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::arg(format!("unknown learner kind '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub kind: LearnerKind,
    /// Size `m` of the initial uniform sample.
    pub initial_sample_m: usize,
    /// Active-set scale; only read by [`LearnerKind::Ucb`].
    pub sigma: f64,
    pub seed: u64,
}

impl LearnerConfig {
    pub fn new(kind: LearnerKind, initial_sample_m: usize, sigma: f64, seed: u64) -> Self {
        LearnerConfig {
            kind,
            initial_sample_m,
            sigma,
            seed,
        }
    }

    pub fn passive(seed: u64) -> Self {
        Self::new(LearnerKind::Passive, 0, 1.0, seed)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        LearnerConfig {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.kind.has_explore_phase() {
            let m = self.initial_sample_m;
            if m == 0 || m > n {
                return Err(Error::arg(format!(
                    "initial_sample_m = {m} must lie in [1, {n}] for {}",
                    self.kind
                )));
            }
        }
        if self.kind == LearnerKind::Ucb && !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::arg(format!(
                "sigma = {} must be positive",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// Active-set radius `sigma * (ln(ell)^2 / ell)^(1/D)`.
pub fn epsilon_radius(sigma: f64, ell: usize, dim: usize) -> Result<f64> {
    if ell == 0 {
        return Err(Error::arg("epsilon_radius needs at least one positive"));
    }
    if dim == 0 {
        return Err(Error::arg("dimension must be positive"));
    }
    let l = ell as f64;
    let ln = l.ln();
    Ok(sigma * (ln * ln / l).powf(1.0 / dim as f64))
}

/// `ceil(n^(D/(D+1)))` clamped to `[1, n]`.
///
/// Computed as the smallest integer `m` with `m^(D+1) >= n^D` whenever the
/// powers fit in `u128`, so exact powers (e.g. `4096^(2/3) = 256`) are not
/// pushed up by rounding.
pub fn recommended_m(n: usize, dim: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    let exponent = dim as f64 / (dim as f64 + 1.0);
    let estimate = (n as f64).powf(exponent).ceil() as usize;
    let target = (n as u128).checked_pow(dim as u32);
    let m = match target {
        Some(target) => {
            let reaches = |m: usize| match (m as u128).checked_pow(dim as u32 + 1) {
                Some(v) => v >= target,
                None => true,
            };
            let mut m = estimate.max(1);
            while m > 1 && reaches(m - 1) {
                m -= 1;
            }
            while !reaches(m) {
                m += 1;
            }
            m
        }
        None => estimate,
    };
    m.clamp(1, n)
}
