use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::distributions::Dataset;
use crate::error::{Error, Result};
use crate::learners::{Learner, LearnerConfig, LearnerKind, Pool, QueryStrategy};
use crate::scalar::Scalar;

/// When the harness ends an episode. The learner never sees this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopRule {
    AllPositivesFound,
    Budget(usize),
}

impl StopRule {
    pub fn validate(&self) -> Result<()> {
        match self {
            StopRule::Budget(0) => Err(Error::arg("budget must be at least 1")),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub step: usize,
    pub index: usize,
    pub label: bool,
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryLog {
    pub kind: LearnerKind,
    pub entries: Vec<LogEntry>,
    /// Positives found after each step.
    pub cum_positives: Vec<usize>,
}

impl QueryLog {
    pub fn new(kind: LearnerKind) -> Self {
        QueryLog {
            kind,
            entries: Vec::new(),
            cum_positives: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn positives_found(&self) -> usize {
        self.cum_positives.last().copied().unwrap_or(0)
    }

    pub fn fallback_steps(&self) -> usize {
        self.entries.iter().filter(|e| e.fallback).count()
    }

    fn push(&mut self, index: usize, label: bool, fallback: bool) {
        let step = self.entries.len() + 1;
        self.entries.push(LogEntry {
            step,
            index,
            label,
            fallback,
        });
        self.cum_positives
            .push(self.positives_found() + label as usize);
    }

    /// CSV with columns `step,index,label,fallback`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "step,index,label,fallback")?;
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{}",
                e.step, e.index, e.label as u8, e.fallback as u8
            )?;
        }
        Ok(())
    }
}

/// Hands out labels one queried index at a time and records every reveal.
#[derive(Debug)]
pub struct LabelOracle<'a> {
    labels: &'a [bool],
    revealed: Vec<bool>,
    reveals: usize,
}

impl<'a> LabelOracle<'a> {
    pub fn new(labels: &'a [bool]) -> Self {
        LabelOracle {
            labels,
            revealed: vec![false; labels.len()],
            reveals: 0,
        }
    }

    pub fn reveal(&mut self, index: usize) -> Result<bool> {
        if self.revealed[index] {
            return Err(Error::Protocol(format!("label {index} revealed twice")));
        }
        self.revealed[index] = true;
        self.reveals += 1;
        Ok(self.labels[index])
    }

    pub fn reveals(&self) -> usize {
        self.reveals
    }
}

/// Runs an arbitrary strategy against `dataset` until `stop` fires or the
/// pool is exhausted.
pub fn run_strategy<T: Scalar, S: QueryStrategy>(
    strategy: &mut S,
    kind: LearnerKind,
    dataset: &Dataset<T>,
    stop: StopRule,
) -> Result<QueryLog> {
    stop.validate()?;
    let n = dataset.n();
    let total_positives = dataset.positive_count();
    let mut oracle = LabelOracle::new(dataset.labels());
    let mut log = QueryLog::new(kind);
    loop {
        let done = match stop {
            StopRule::AllPositivesFound => log.positives_found() == total_positives,
            StopRule::Budget(b) => log.len() >= b,
        };
        if done || log.len() == n {
            break;
        }
        let q = strategy.next_query()?;
        let label = oracle.reveal(q.index)?;
        strategy.observe(q.index, label)?;
        log.push(q.index, label, q.fallback);
    }
    debug_assert_eq!(oracle.reveals(), log.len());
    Ok(log)
}

/// Runs one learner episode. Oracle kinds are the only ones handed support flags.
pub fn run_episode<T: Scalar>(
    dataset: &Dataset<T>,
    config: &LearnerConfig,
    stop: StopRule,
) -> Result<QueryLog> {
    stop.validate()?;
    if stop == StopRule::AllPositivesFound && dataset.positive_count() == 0 {
        return Ok(QueryLog::new(config.kind));
    }
    let pool = if config.kind.is_oracle() {
        Pool::with_support(dataset)
    } else {
        Pool::of(dataset)
    };
    let mut learner = Learner::new(config, pool)?;
    run_strategy(&mut learner, config.kind, dataset, stop)
}
