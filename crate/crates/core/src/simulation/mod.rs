//! Episode driver, cost accounting and retrieval metrics.

mod episode;
mod metrics;
mod trials;

pub use episode::{run_episode, run_strategy, LabelOracle, LogEntry, QueryLog, StopRule};
pub use metrics::{q_opt, score_run, QOptKind, RunResult, DEFAULT_CHECKPOINTS};
pub use trials::{run_on_dataset, run_trial, run_trials, run_trials_on, trial_seed};
