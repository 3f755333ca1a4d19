use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::{euclidean, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Explore,
    Commit,
}

/// What a learner knows after `step` queries.
#[derive(Debug, Clone)]
pub struct LearnerState<T> {
    /// `labeled[i]` is set once point `i` has been queried.
    pub labeled: Vec<bool>,
    /// Positives in the order they were found.
    pub positives: Vec<usize>,
    /// Exact distance from each point to its nearest found positive (`+inf` before any).
    pub min_dist: Vec<T>,
    pub phase: Phase,
    pub step: usize,
}

impl<T: Scalar> LearnerState<T> {
    pub fn new(n: usize, phase: Phase) -> Self {
        LearnerState {
            labeled: vec![false; n],
            positives: Vec::new(),
            min_dist: vec![T::infinity(); n],
            phase,
            step: 0,
        }
    }

    pub fn labeled_count(&self) -> usize {
        self.step
    }

    pub fn is_labeled(&self, i: usize) -> bool {
        self.labeled[i]
    }
}

/// The UCB active set intersected with the unlabeled points.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSetView<T> {
    pub radius: T,
    /// Unlabeled point indices, ascending.
    pub members: Vec<usize>,
}

impl<T: Scalar> ActiveSetView<T> {
    /// Recomputes the view from the state by a full scan.
    pub fn from_state(state: &LearnerState<T>, radius: T) -> Self {
        let members = (0..state.labeled.len())
            .filter(|&i| !state.labeled[i] && state.min_dist[i] <= radius)
            .collect();
        ActiveSetView { radius, members }
    }
}

/// Lowers every entry of `min_dist` to its distance from point
/// `new_positive`. `O(n)`.
pub fn min_dist_update<T: Scalar>(
    min_dist: &mut [T],
    points: &[T],
    dim: usize,
    new_positive: usize,
) {
    let x = &points[new_positive * dim..(new_positive + 1) * dim];
    for (i, entry) in min_dist.iter_mut().enumerate() {
        let d = euclidean(&points[i * dim..(i + 1) * dim], x);
        if d < *entry {
            *entry = d;
        }
    }
}

/// Unlabeled indices with O(1) uniform draws and removals.
///
/// The order of `items` is part of the sampling contract: two sets that saw
/// the same removals draw the same indices from the same RNG.
#[derive(Debug, Clone)]
pub struct UnlabeledSet {
    items: Vec<usize>,
    slot: Vec<usize>,
}

impl UnlabeledSet {
    pub fn full(n: usize) -> Self {
        UnlabeledSet {
            items: (0..n).collect(),
            slot: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.slot[i] != usize::MAX
    }

    pub fn remove(&mut self, i: usize) {
        let s = self.slot[i];
        if s == usize::MAX {
            return;
        }
        let last = *self.items.last().expect("non-empty when a slot is live");
        self.items.swap_remove(s);
        if last != i {
            self.slot[last] = s;
        }
        self.slot[i] = usize::MAX;
    }

    /// Uniform draw; `None` when empty.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        if self.items.is_empty() {
            None
        } else {
            Some(self.items[rng.random_range(0..self.items.len())])
        }
    }
}
