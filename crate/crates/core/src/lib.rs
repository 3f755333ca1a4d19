//! Simulator for the active covering problem: retrieve every positive point
//! of an unlabeled pool with as few label queries as possible.
//!
//! * [`distributions`]: mixtures with known positive support and dataset I/O.
//! * [`learners`]: passive, offline, explore-then-commit, UCB and oracle strategies.
//! * [`simulation`]: episodes, excess query cost and recall metrics.
//! * [`analysis`]: sweep aggregation and log-log rate fits.
//!
//! Geometry is generic over [`Scalar`] (`f32` or `f64`); the aliases below fix
//! the common `f64` instantiation.

// negated comparisons reject NaN parameters
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod distributions;
mod error;
pub mod learners;
pub mod rng;
mod scalar;
pub mod simulation;

pub use error::{Error, Result};
pub use scalar::{euclidean, Scalar};

pub type Dataset = distributions::Dataset<f64>;
pub type Dataset32 = distributions::Dataset<f32>;
pub type DistributionSpec = distributions::DistributionSpec<f64>;
pub type DistributionSpec32 = distributions::DistributionSpec<f32>;
pub type Region = distributions::Region<f64>;
pub type Learner<'a> = learners::Learner<'a, f64>;
pub type Learner32<'a> = learners::Learner<'a, f32>;
pub type LearnerState = learners::LearnerState<f64>;
pub type Pool<'a> = learners::Pool<'a, f64>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
