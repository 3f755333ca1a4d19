//! Brute-force strategies used as oracles for the indexed [`Learner`].
//!
//! Every commit step recomputes distances from scratch over all found
//! positives, `O(n * |X_p|)` per query. Randomness is consumed in exactly the
//! same pattern as [`Learner`], so for equal configs the two must emit
//! identical query sequences.
//!
//! [`Learner`]: super::Learner

use super::config::{epsilon_radius, LearnerConfig, LearnerKind};
use super::learner::{initial_plan, Pool, Query, QueryStrategy};
use super::state::UnlabeledSet;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, ChaCha8Rng, Stream};
use crate::scalar::{euclidean, Scalar};

pub struct NaiveLearner<'a, T: Scalar> {
    config: LearnerConfig,
    pool: Pool<'a, T>,
    rng: ChaCha8Rng,
    labeled: Vec<bool>,
    positives: Vec<usize>,
    scorer: Option<Vec<usize>>,
    unlabeled: UnlabeledSet,
    plan: Vec<usize>,
    cursor: usize,
    pending: Option<usize>,
}

impl<'a, T: Scalar> NaiveLearner<'a, T> {
    pub fn new(config: &LearnerConfig, pool: Pool<'a, T>) -> Result<Self> {
        if !config.kind.has_explore_phase() {
            return Err(Error::arg(format!(
                "no naive reference for {}",
                config.kind
            )));
        }
        let n = pool.n();
        config.validate(n)?;
        let mut rng = stream_rng(config.seed, Stream::Learner);
        let plan = initial_plan(config.kind, n, config.initial_sample_m, &mut rng);
        Ok(NaiveLearner {
            config: config.clone(),
            pool,
            rng,
            labeled: vec![false; n],
            positives: Vec::new(),
            scorer: None,
            unlabeled: UnlabeledSet::full(n),
            plan,
            cursor: 0,
            pending: None,
        })
    }

    fn distance_to(&self, i: usize, set: &[usize]) -> T {
        let mut best = T::infinity();
        for &p in set {
            let d = euclidean(self.pool.point(i), self.pool.point(p));
            if d < best {
                best = d;
            }
        }
        best
    }

    /// Lowest-index unlabeled point minimizing the distance to `set`.
    fn argmin_to(&self, set: &[usize]) -> (T, usize) {
        let mut best = (T::infinity(), usize::MAX);
        for i in 0..self.pool.n() {
            if self.labeled[i] {
                continue;
            }
            let d = self.distance_to(i, set);
            if best.1 == usize::MAX || d < best.0 {
                best = (d, i);
            }
        }
        best
    }
}

impl<T: Scalar> QueryStrategy for NaiveLearner<'_, T> {
    fn next_query(&mut self) -> Result<Query> {
        if self.pending.is_some() {
            return Err(Error::Protocol("outstanding query".into()));
        }
        if self.unlabeled.is_empty() {
            return Err(Error::State("every point has been queried".into()));
        }
        let query = if self.cursor < self.plan.len() {
            self.cursor += 1;
            Query {
                index: self.plan[self.cursor - 1],
                fallback: false,
            }
        } else if self.positives.is_empty() {
            Query {
                index: self.unlabeled.sample(&mut self.rng).expect("non-empty"),
                fallback: true,
            }
        } else {
            match self.config.kind {
                LearnerKind::Offline => {
                    if self.scorer.is_none() {
                        self.scorer = Some(self.positives.clone());
                    }
                    let scorer = self.scorer.clone().expect("set above");
                    Query {
                        index: self.argmin_to(&scorer).1,
                        fallback: false,
                    }
                }
                LearnerKind::ExploreCommit => Query {
                    index: self.argmin_to(&self.positives).1,
                    fallback: false,
                },
                LearnerKind::Ucb => {
                    let radius = T::of(epsilon_radius(
                        self.config.sigma,
                        self.positives.len(),
                        self.pool.dim(),
                    )?);
                    let any_member = (0..self.pool.n()).any(|i| {
                        !self.labeled[i] && self.distance_to(i, &self.positives) <= radius
                    });
                    if any_member {
                        loop {
                            let j = self.unlabeled.sample(&mut self.rng).expect("non-empty");
                            if self.distance_to(j, &self.positives) <= radius {
                                break Query {
                                    index: j,
                                    fallback: false,
                                };
                            }
                        }
                    } else {
                        Query {
                            index: self.argmin_to(&self.positives).1,
                            fallback: true,
                        }
                    }
                }
                _ => unreachable!("constructor admits explore kinds only"),
            }
        };
        self.pending = Some(query.index);
        Ok(query)
    }

    fn observe(&mut self, index: usize, label: bool) -> Result<()> {
        if self.pending != Some(index) {
            return Err(Error::Protocol(format!(
                "unexpected observation of {index}"
            )));
        }
        self.pending = None;
        self.labeled[index] = true;
        self.unlabeled.remove(index);
        if label {
            self.positives.push(index);
        }
        Ok(())
    }
}
