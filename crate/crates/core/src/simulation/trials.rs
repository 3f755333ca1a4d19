use rayon::prelude::*;

use super::episode::{run_episode, QueryLog, StopRule};
use super::metrics::{score_run, RunResult};
use crate::distributions::{Dataset, DistributionSpec};
use crate::error::{Error, Result};
use crate::learners::LearnerConfig;
use crate::rng::mix64;
use crate::scalar::Scalar;

/// Seed for trial `i`: `mix64(base_seed, i)`. Used both for the dataset and
/// for the learner (on separate RNG streams).
pub fn trial_seed(base_seed: u64, trial: usize) -> u64 {
    mix64(base_seed, trial as u64)
}

/// Samples a dataset with `seed`, runs the learner seeded with `seed`, and scores it.
pub fn run_trial<T: Scalar>(
    spec: &DistributionSpec<T>,
    n: usize,
    config: &LearnerConfig,
    stop: StopRule,
    seed: u64,
    checkpoints: usize,
) -> Result<(QueryLog, RunResult)> {
    let dataset = spec.sample_dataset(n, seed)?;
    run_on_dataset(&dataset, config, stop, seed, checkpoints)
}

pub fn run_on_dataset<T: Scalar>(
    dataset: &Dataset<T>,
    config: &LearnerConfig,
    stop: StopRule,
    learner_seed: u64,
    checkpoints: usize,
) -> Result<(QueryLog, RunResult)> {
    let log = run_episode(dataset, &config.with_seed(learner_seed), stop)?;
    let result = score_run(&log, dataset, checkpoints)?;
    Ok((log, result))
}

/// Independent trials, possibly in parallel; results are ordered by trial index.
pub fn run_trials<T: Scalar>(
    spec: &DistributionSpec<T>,
    n: usize,
    config: &LearnerConfig,
    stop: StopRule,
    trials: usize,
    base_seed: u64,
    checkpoints: usize,
) -> Result<Vec<RunResult>> {
    if trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    spec.validate()?;
    config.validate(n)?;
    (0..trials)
        .into_par_iter()
        .map(|i| {
            run_trial(spec, n, config, stop, trial_seed(base_seed, i), checkpoints).map(|(_, r)| r)
        })
        .collect()
}

/// Trials over one fixed dataset; only the learner seed varies.
pub fn run_trials_on<T: Scalar>(
    dataset: &Dataset<T>,
    config: &LearnerConfig,
    stop: StopRule,
    trials: usize,
    base_seed: u64,
    checkpoints: usize,
) -> Result<Vec<RunResult>> {
    if trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    config.validate(dataset.n())?;
    (0..trials)
        .into_par_iter()
        .map(|i| {
            run_on_dataset(dataset, config, stop, trial_seed(base_seed, i), checkpoints)
                .map(|(_, r)| r)
        })
        .collect()
}
