use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::fit::Z95;
use crate::error::{Error, Result};
use crate::learners::LearnerKind;
use crate::simulation::RunResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub trials: usize,
    pub mean_excess: f64,
    pub std_excess: f64,
    /// `mean +- 1.96 * std / sqrt(trials)`; absent for a single trial.
    pub ci95: Option<(f64, f64)>,
    pub mean_auc: f64,
    pub mean_q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub kind: LearnerKind,
    pub dim: usize,
    /// Sorted by `n`.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn row(&self, n: usize) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    pub fn ns(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.n as f64).collect()
    }

    pub fn mean_excesses(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mean_excess).collect()
    }
}

/// Mean and sample standard deviation. Values are sorted first so the result
/// does not depend on input order.
fn mean_std(values: &mut [f64]) -> (f64, f64) {
    values.sort_by(|a, b| a.total_cmp(b));
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, var.sqrt())
}

pub fn summarize_rows(
    kind: LearnerKind,
    dim: usize,
    results: &[&RunResult],
) -> Result<SweepResult> {
    let mut by_n: BTreeMap<usize, Vec<&RunResult>> = BTreeMap::new();
    for r in results {
        if r.kind != kind {
            return Err(Error::arg(format!(
                "sweep mixes learner kinds {} and {}",
                kind, r.kind
            )));
        }
        if r.dim != dim {
            return Err(Error::arg(format!(
                "sweep mixes dimensions {} and {}",
                dim, r.dim
            )));
        }
        by_n.entry(r.n).or_default().push(r);
    }
    let rows = by_n
        .into_iter()
        .map(|(n, cell)| {
            let trials = cell.len();
            let mut excess: Vec<f64> = cell.iter().map(|r| r.excess as f64).collect();
            let mut auc: Vec<f64> = cell.iter().map(|r| r.auc).collect();
            let mut q: Vec<f64> = cell.iter().map(|r| r.q as f64).collect();
            let (mean_excess, std_excess) = mean_std(&mut excess);
            let half = Z95 * std_excess / (trials as f64).sqrt();
            SweepRow {
                n,
                trials,
                mean_excess,
                std_excess,
                ci95: (trials >= 2).then_some((mean_excess - half, mean_excess + half)),
                mean_auc: mean_std(&mut auc).0,
                mean_q: mean_std(&mut q).0,
            }
        })
        .collect();
    Ok(SweepResult { kind, dim, rows })
}

/// Aggregates per-`(kind, n)` trial lists of a single learner kind.
pub fn summarize_sweep(results: &[Vec<RunResult>]) -> Result<SweepResult> {
    let first = results
        .iter()
        .flatten()
        .next()
        .ok_or_else(|| Error::InsufficientData("no run results to summarize".into()))?;
    let all: Vec<&RunResult> = results.iter().flatten().collect();
    summarize_rows(first.kind, first.dim, &all)
}
