use serde::{Deserialize, Serialize};

use super::episode::QueryLog;
use crate::distributions::Dataset;
use crate::error::{Error, Result};
use crate::learners::LearnerKind;
use crate::scalar::Scalar;

/// Default number of recall checkpoints (5% of the pool each).
pub const DEFAULT_CHECKPOINTS: usize = 20;

/// How `q_opt` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QOptKind {
    /// Number of pool points inside the true positive support.
    SupportCount,
    /// Number of positive labels; a lower bound when support is unknown.
    PositiveCountLowerBound,
}

impl QOptKind {
    pub fn name(self) -> &'static str {
        match self {
            QOptKind::SupportCount => "support-count",
            QOptKind::PositiveCountLowerBound => "positive-count-lower-bound",
        }
    }
}

/// Query count of the learner that knows the positive support.
pub fn q_opt<T: Scalar>(dataset: &Dataset<T>) -> (usize, QOptKind) {
    match dataset.support_mask() {
        Some(mask) => (mask.iter().filter(|&&m| m).count(), QOptKind::SupportCount),
        None => (dataset.positive_count(), QOptKind::PositiveCountLowerBound),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub kind: LearnerKind,
    pub dim: usize,
    pub n: usize,
    pub seed: Option<u64>,
    pub q: usize,
    pub q_opt: usize,
    /// `q - q_opt`.
    pub excess: i64,
    pub n_pos: usize,
    pub recall_curve: Vec<f64>,
    pub auc: f64,
    pub q_opt_kind: QOptKind,
    pub fallback_steps: usize,
}

/// Checkpoint `k` (1-based) sits after `ceil(k * n / B)` queries; the curve
/// holds the fraction of all positives found by then. `auc` is its mean.
pub fn score_run<T: Scalar>(
    log: &QueryLog,
    dataset: &Dataset<T>,
    checkpoints: usize,
) -> Result<RunResult> {
    if checkpoints == 0 {
        return Err(Error::arg("need at least one checkpoint"));
    }
    let n = dataset.n();
    let n_pos = dataset.positive_count();
    let q = log.len();
    let recall_curve: Vec<f64> = (1..=checkpoints)
        .map(|k| {
            if n_pos == 0 {
                return 1.0;
            }
            let budget = (k * n).div_ceil(checkpoints).min(q);
            let found = if budget == 0 {
                0
            } else {
                log.cum_positives[budget - 1]
            };
            found as f64 / n_pos as f64
        })
        .collect();
    let auc = recall_curve.iter().sum::<f64>() / checkpoints as f64;
    let (q_opt, q_opt_kind) = q_opt(dataset);
    Ok(RunResult {
        kind: log.kind,
        dim: dataset.dim(),
        n,
        seed: dataset.seed(),
        q,
        q_opt,
        excess: q as i64 - q_opt as i64,
        n_pos,
        recall_curve,
        auc,
        q_opt_kind,
        fallback_steps: log.fallback_steps(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::SupportFlag;
    use crate::learners::LearnerConfig;
    use crate::simulation::{run_episode, StopRule};

    fn line(labels: &[bool]) -> Dataset<f64> {
        let n = labels.len();
        Dataset::unlabeled_support(1, (0..n).map(|i| i as f64).collect(), labels.to_vec()).unwrap()
    }

    #[test]
    fn q_opt_kinds() {
        let d = line(&[true, false, true]);
        assert_eq!(q_opt(&d), (2, QOptKind::PositiveCountLowerBound));
        let d = Dataset::new(
            1,
            vec![0.0, 1.0, 2.0],
            vec![true, true, true],
            vec![SupportFlag::Inside; 3],
            Some(1),
        )
        .unwrap();
        assert_eq!(q_opt(&d), (3, QOptKind::SupportCount));
    }

    #[test]
    fn immediate_completion_scores_one() {
        let mut labels = vec![false; 40];
        labels[0] = true;
        let d = line(&labels);
        let mut log = QueryLog::new(LearnerKind::Passive);
        log.entries.push(crate::simulation::LogEntry {
            step: 1,
            index: 0,
            label: true,
            fallback: false,
        });
        log.cum_positives.push(1);
        let r = score_run(&log, &d, 20).unwrap();
        assert!(r.recall_curve.iter().all(|&v| v == 1.0));
        assert_eq!(r.auc, 1.0);
        assert_eq!(r.q, 1);
    }

    #[test]
    fn budget_truncated_half_recall() {
        let d = line(&[true, true, false, false]);
        let log = run_episode(&d, &LearnerConfig::passive(0), StopRule::Budget(4)).unwrap();
        let mut truncated = log.clone();
        let first = log.cum_positives.iter().position(|&c| c == 1).unwrap();
        truncated.entries.truncate(first + 1);
        truncated.cum_positives.truncate(first + 1);
        let r = score_run(&truncated, &d, 4).unwrap();
        assert_eq!(*r.recall_curve.last().unwrap(), 0.5);
    }

    #[test]
    fn no_positives_is_vacuous_recall() {
        let d = line(&[false, false]);
        let log = QueryLog::new(LearnerKind::Passive);
        let r = score_run(&log, &d, 5).unwrap();
        assert_eq!(r.recall_curve, vec![1.0; 5]);
        assert_eq!(r.auc, 1.0);
        assert!(score_run(&log, &d, 0).is_err());
    }

    #[test]
    fn checkpoint_positions() {
        // n = 10, B = 4 -> checkpoints after 3, 5, 8, 10 queries
        let labels: Vec<bool> = (0..10).map(|_| true).collect();
        let d = line(&labels);
        let log = run_episode(&d, &LearnerConfig::passive(2), StopRule::AllPositivesFound).unwrap();
        let r = score_run(&log, &d, 4).unwrap();
        assert_eq!(r.recall_curve, vec![0.3, 0.5, 0.8, 1.0]);
        assert_eq!(r.excess, 10 - 10);
    }
}
