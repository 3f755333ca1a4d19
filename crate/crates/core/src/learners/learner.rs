use std::cmp::Ordering;

use rand::seq::SliceRandom;

use super::config::{epsilon_radius, LearnerConfig, LearnerKind};
use super::index::DistanceIndex;
use super::state::{ActiveSetView, LearnerState, Phase, UnlabeledSet};
use crate::distributions::{Dataset, SupportFlag};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, ChaCha8Rng, Stream};
use crate::scalar::Scalar;

/// The unlabeled pool as seen by a learner. Labels are never part of it;
/// support flags are present only when the harness grants them to an oracle.
#[derive(Debug, Clone, Copy)]
pub struct Pool<'a, T> {
    dim: usize,
    points: &'a [T],
    support: Option<&'a [SupportFlag]>,
}

impl<'a, T: Scalar> Pool<'a, T> {
    pub fn new(dim: usize, points: &'a [T]) -> Self {
        assert!(dim > 0 && points.len().is_multiple_of(dim));
        Pool {
            dim,
            points,
            support: None,
        }
    }

    pub fn of(dataset: &'a Dataset<T>) -> Self {
        Self::new(dataset.dim(), dataset.points())
    }

    /// Pool carrying ground-truth support flags, for oracle learners.
    pub fn with_support(dataset: &'a Dataset<T>) -> Self {
        Pool {
            support: Some(dataset.in_support()),
            ..Self::of(dataset)
        }
    }

    pub fn n(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &'a [T] {
        self.points
    }

    pub fn point(&self, i: usize) -> &'a [T] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    fn support_mask(&self) -> Option<Vec<bool>> {
        self.support?.iter().map(|f| f.known()).collect()
    }
}

/// One selected point; `fallback` marks steps taken outside the kind's
/// normal policy (no positives yet, or an empty UCB active set).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Query {
    pub index: usize,
    pub fallback: bool,
}

/// Sequential query interface shared by every strategy implementation.
pub trait QueryStrategy {
    fn next_query(&mut self) -> Result<Query>;
    fn observe(&mut self, index: usize, label: bool) -> Result<()>;
}

/// Uniform sample of `m` explore indices, or a full shuffle for passive.
pub(crate) fn initial_plan(
    kind: LearnerKind,
    n: usize,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    if kind.has_explore_phase() {
        rand::seq::index::sample(rng, n, m).into_vec()
    } else {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        order
    }
}

pub struct Learner<'a, T: Scalar> {
    config: LearnerConfig,
    pool: Pool<'a, T>,
    rng: ChaCha8Rng,
    state: LearnerState<T>,
    index: DistanceIndex<T>,
    unlabeled: UnlabeledSet,
    plan: Vec<usize>,
    cursor: usize,
    offline_order: Option<Vec<usize>>,
    offline_cursor: usize,
    radius: T,
    pending: Option<usize>,
}

impl<'a, T: Scalar> Learner<'a, T> {
    pub fn new(config: &LearnerConfig, pool: Pool<'a, T>) -> Result<Self> {
        let n = pool.n();
        if n == 0 {
            return Err(Error::arg("empty pool"));
        }
        config.validate(n)?;
        let mut rng = stream_rng(config.seed, Stream::Learner);
        let plan = if config.kind.is_oracle() {
            let mask = pool.support_mask().ok_or_else(|| {
                Error::Capability(format!(
                    "{} needs known support membership for every point",
                    config.kind
                ))
            })?;
            let (mut inside, mut outside): (Vec<usize>, Vec<usize>) =
                (0..n).partition(|&i| mask[i]);
            if config.kind == LearnerKind::OracleUniform {
                inside.shuffle(&mut rng);
                outside.shuffle(&mut rng);
            }
            inside.extend(outside);
            inside
        } else {
            initial_plan(config.kind, n, config.initial_sample_m, &mut rng)
        };
        let phase = if config.kind.has_explore_phase() {
            Phase::Explore
        } else {
            Phase::Commit
        };
        Ok(Learner {
            config: config.clone(),
            pool,
            rng,
            state: LearnerState::new(n, phase),
            index: DistanceIndex::build(pool.points(), pool.dim()),
            unlabeled: UnlabeledSet::full(n),
            plan,
            cursor: 0,
            offline_order: None,
            offline_cursor: 0,
            radius: T::zero(),
            pending: None,
        })
    }

    pub fn kind(&self) -> LearnerKind {
        self.config.kind
    }

    pub fn state(&self) -> &LearnerState<T> {
        &self.state
    }

    /// The pre-committed prefix: explore sample, passive permutation or oracle order.
    pub fn plan(&self) -> &[usize] {
        &self.plan
    }

    /// Current UCB radius (zero until the first positive).
    pub fn radius(&self) -> T {
        self.radius
    }

    /// Active set of a UCB learner with at least one positive.
    pub fn active_set(&self) -> Option<ActiveSetView<T>> {
        (self.config.kind == LearnerKind::Ucb && !self.state.positives.is_empty())
            .then(|| ActiveSetView::from_state(&self.state, self.radius))
    }

    /// Active set gathered through the index instead of a full scan.
    pub fn active_members_indexed(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.index.for_each_within(
            self.radius,
            &self.state.min_dist,
            &self.state.labeled,
            |i| out.push(i),
        );
        out.sort_unstable();
        out
    }

    fn commit_query(&mut self) -> Query {
        if self.state.positives.is_empty() {
            let index = self
                .unlabeled
                .sample(&mut self.rng)
                .expect("unlabeled points remain");
            return Query {
                index,
                fallback: true,
            };
        }
        match self.config.kind {
            LearnerKind::Offline => {
                if self.offline_order.is_none() {
                    self.offline_order = Some(self.frozen_order());
                }
                let order = self.offline_order.as_ref().expect("built above");
                while self.state.labeled[order[self.offline_cursor]] {
                    self.offline_cursor += 1;
                }
                let index = order[self.offline_cursor];
                self.offline_cursor += 1;
                Query {
                    index,
                    fallback: false,
                }
            }
            LearnerKind::ExploreCommit => {
                let (_, index) = self
                    .index
                    .best_unlabeled()
                    .expect("unlabeled points remain");
                Query {
                    index,
                    fallback: false,
                }
            }
            LearnerKind::Ucb => {
                let (nearest, argmin) = self
                    .index
                    .best_unlabeled()
                    .expect("unlabeled points remain");
                if nearest <= self.radius {
                    // Rejection from the unlabeled set is exactly uniform on the members.
                    loop {
                        let j = self.unlabeled.sample(&mut self.rng).expect("non-empty");
                        if self.state.min_dist[j] <= self.radius {
                            return Query {
                                index: j,
                                fallback: false,
                            };
                        }
                    }
                }
                Query {
                    index: argmin,
                    fallback: true,
                }
            }
            _ => unreachable!("only explore kinds reach the commit policy"),
        }
    }

    /// Unlabeled points sorted by distance to the current positives, ties by index.
    fn frozen_order(&self) -> Vec<usize> {
        let n = self.pool.n();
        let mut scorer = DistanceIndex::build(self.pool.points(), self.pool.dim());
        let mut scores = vec![T::infinity(); n];
        for &p in &self.state.positives {
            scorer.add_positive(self.pool.point(p), &mut scores, &self.state.labeled);
        }
        let mut order: Vec<usize> = (0..n).filter(|&i| !self.state.labeled[i]).collect();
        order.sort_by(|&a, &b| {
            scores[a]
                .partial_cmp(&scores[b])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        order
    }
}

impl<T: Scalar> QueryStrategy for Learner<'_, T> {
    fn next_query(&mut self) -> Result<Query> {
        if let Some(i) = self.pending {
            return Err(Error::Protocol(format!(
                "query {i} has not been observed yet"
            )));
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
        } else {
            self.commit_query()
        };
        self.pending = Some(query.index);
        Ok(query)
    }

    fn observe(&mut self, index: usize, label: bool) -> Result<()> {
        if self.pending != Some(index) {
            return Err(Error::Protocol(format!(
                "observed index {index} but the outstanding query is {:?}",
                self.pending
            )));
        }
        self.pending = None;
        self.state.labeled[index] = true;
        self.unlabeled.remove(index);
        self.index
            .mark_labeled(index, &self.state.min_dist, &self.state.labeled);
        if label {
            self.state.positives.push(index);
            self.index.add_positive(
                self.pool.point(index),
                &mut self.state.min_dist,
                &self.state.labeled,
            );
            if self.config.kind == LearnerKind::Ucb {
                let eps = epsilon_radius(
                    self.config.sigma,
                    self.state.positives.len(),
                    self.pool.dim(),
                )?;
                self.radius = T::of(eps);
            }
        }
        self.state.step += 1;
        if self.config.kind.has_explore_phase() && self.cursor >= self.plan.len() {
            self.state.phase = Phase::Commit;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_points() -> Dataset<f64> {
        Dataset::unlabeled_support(
            1,
            vec![0.0, 0.1, 0.3, 0.35, 0.9],
            vec![true, true, false, true, false],
        )
        .unwrap()
    }

    /// Learner whose explore sample is replaced by `explore`.
    fn with_explore<'a>(
        kind: LearnerKind,
        ds: &'a Dataset<f64>,
        explore: Vec<usize>,
        sigma: f64,
    ) -> Learner<'a, f64> {
        let config = LearnerConfig::new(kind, explore.len(), sigma, 0);
        let mut l = Learner::new(&config, Pool::of(ds)).unwrap();
        l.plan = explore;
        l
    }

    fn drive(l: &mut Learner<'_, f64>, ds: &Dataset<f64>) -> Vec<Query> {
        let mut out = Vec::new();
        let total = ds.positive_count();
        let mut found = 0;
        while found < total {
            let q = l.next_query().unwrap();
            let label = ds.label(q.index);
            l.observe(q.index, label).unwrap();
            found += label as usize;
            out.push(q);
        }
        out
    }

    #[test]
    fn explore_commit_hand_simulation() {
        let ds = five_points();
        let mut l = with_explore(LearnerKind::ExploreCommit, &ds, vec![0], 1.0);
        let idx: Vec<usize> = drive(&mut l, &ds).iter().map(|q| q.index).collect();
        assert_eq!(idx, vec![0, 1, 2, 3]);
        assert_eq!(l.state().positives, vec![0, 1, 3]);
    }

    #[test]
    fn offline_hand_simulation() {
        let ds = five_points();
        let mut l = with_explore(LearnerKind::Offline, &ds, vec![0], 1.0);
        let idx: Vec<usize> = drive(&mut l, &ds).iter().map(|q| q.index).collect();
        assert_eq!(idx, vec![0, 1, 2, 3]);
        assert_eq!(l.offline_order.as_deref(), Some(&[1, 2, 3, 4][..]));
    }

    #[test]
    fn ucb_with_one_positive_falls_back() {
        let ds = five_points();
        let mut l = with_explore(LearnerKind::Ucb, &ds, vec![0], 1.0);
        let q = l.next_query().unwrap();
        l.observe(q.index, true).unwrap();
        assert_eq!(l.radius(), 0.0);
        assert_eq!(l.active_set().unwrap().members, Vec::<usize>::new());
        let q = l.next_query().unwrap();
        assert!(q.fallback);
        assert_eq!(q.index, 1);
    }

    #[test]
    fn observe_updates_min_dist() {
        let ds = five_points();
        let mut l = with_explore(LearnerKind::ExploreCommit, &ds, vec![0], 1.0);
        let q = l.next_query().unwrap();
        l.observe(q.index, true).unwrap();
        assert_eq!(l.state().min_dist[2], 0.3);
        let q = l.next_query().unwrap();
        assert_eq!(q.index, 1);
        l.observe(1, true).unwrap();
        assert!((l.state().min_dist[2] - 0.2).abs() < 1e-15);
        let before = l.state().min_dist.clone();
        let q = l.next_query().unwrap();
        l.observe(q.index, false).unwrap();
        assert_eq!(l.state().min_dist, before);
        assert_eq!(l.state().positives.len(), 2);
    }

    #[test]
    fn identical_point_gets_zero_distance() {
        let ds = Dataset::unlabeled_support(
            2,
            vec![1.0, 1.0, 1.0, 1.0, 5.0, 5.0],
            vec![true, true, false],
        )
        .unwrap();
        let mut l = with_explore(LearnerKind::ExploreCommit, &ds, vec![0], 1.0);
        let q = l.next_query().unwrap();
        l.observe(q.index, true).unwrap();
        assert_eq!(l.state().min_dist[1], 0.0);
    }

    #[test]
    fn passive_plan_is_a_permutation() {
        let ds =
            Dataset::unlabeled_support(1, vec![0.0, 1.0, 2.0], vec![true, false, true]).unwrap();
        let l = Learner::new(&LearnerConfig::passive(17), Pool::of(&ds)).unwrap();
        let mut p = l.plan().to_vec();
        p.sort_unstable();
        assert_eq!(p, vec![0, 1, 2]);
    }

    #[test]
    fn explore_sample_size() {
        let ds = five_points();
        let config = LearnerConfig::new(LearnerKind::ExploreCommit, 1, 1.0, 99);
        let l = Learner::new(&config, Pool::of(&ds)).unwrap();
        assert_eq!(l.plan().len(), 1);
        assert!(l.plan()[0] < 5);
        assert_eq!(l.state().phase, Phase::Explore);
    }

    #[test]
    fn oracle_needs_known_support() {
        let ds = five_points();
        let config = LearnerConfig::new(LearnerKind::OracleGreedy, 0, 1.0, 0);
        assert!(matches!(
            Learner::new(&config, Pool::with_support(&ds)),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            Learner::new(&config, Pool::of(&ds)),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn m_larger_than_n_is_rejected() {
        let ds = five_points();
        let config = LearnerConfig::new(LearnerKind::Offline, 6, 1.0, 0);
        assert!(matches!(
            Learner::new(&config, Pool::of(&ds)),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn protocol_and_termination_errors() {
        let ds = Dataset::unlabeled_support(1, vec![0.0, 1.0], vec![true, false]).unwrap();
        let mut l = Learner::new(&LearnerConfig::passive(1), Pool::of(&ds)).unwrap();
        let q = l.next_query().unwrap();
        assert!(matches!(l.next_query(), Err(Error::Protocol(_))));
        assert!(matches!(
            l.observe(1 - q.index, false),
            Err(Error::Protocol(_))
        ));
        l.observe(q.index, ds.label(q.index)).unwrap();
        let q = l.next_query().unwrap();
        l.observe(q.index, ds.label(q.index)).unwrap();
        assert!(matches!(l.next_query(), Err(Error::State(_))));
    }

    #[test]
    fn zero_explore_positives_use_uniform_fallback() {
        let ds =
            Dataset::unlabeled_support(1, vec![0.0, 1.0, 2.0, 3.0], vec![false, false, true, true])
                .unwrap();
        for kind in [
            LearnerKind::Offline,
            LearnerKind::ExploreCommit,
            LearnerKind::Ucb,
        ] {
            let mut l = with_explore(kind, &ds, vec![0], 1.0);
            let qs = drive(&mut l, &ds);
            assert!(!qs[0].fallback);
            let first_pos = qs.iter().position(|q| ds.label(q.index)).unwrap();
            assert!(qs[1..=first_pos].iter().all(|q| q.fallback), "{kind}");
        }
    }
}
