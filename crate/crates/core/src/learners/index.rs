//! Kd-tree over the pool that keeps the per-point minimum distance to the
//! labeled positives up to date.
//!
//! Every node carries two aggregates over its subtree:
//!
//! * `max_dist`: the largest cached min-distance of any point (labeled or not),
//!   used to prune positive insertions. A new positive at distance `>= max_dist`
//!   from the node's bounding box cannot lower any entry below it.
//! * `best`: the lexicographically smallest `(min_dist, index)` over unlabeled
//!   points, so the global argmin with lowest-index tie-break sits at the root.
//!
//! The distances written into the cache are computed by [`euclidean`], so the
//! cache is bit-identical to a brute-force minimum over all positives.

use std::cmp::Ordering;

use crate::scalar::{euclidean, Scalar};

const LEAF_SIZE: usize = 12;
const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Node<T> {
    lo: u32,
    hi: u32,
    left: u32,
    right: u32,
    parent: u32,
    max_dist: T,
    best_dist: T,
    best_index: u32,
}

impl<T: Scalar> Node<T> {
    fn is_leaf(&self) -> bool {
        self.left == NONE
    }
}

#[inline]
fn better<T: Scalar>(a: (T, u32), b: (T, u32)) -> bool {
    match a.0.partial_cmp(&b.0) {
        Some(Ordering::Less) => true,
        Some(Ordering::Greater) => false,
        _ => a.1 < b.1,
    }
}

#[derive(Debug, Clone)]
pub struct DistanceIndex<T> {
    dim: usize,
    /// Point coordinates in tree order.
    coords: Vec<T>,
    /// Tree position -> point index.
    perm: Vec<u32>,
    /// Point index -> leaf node.
    leaf_of: Vec<u32>,
    nodes: Vec<Node<T>>,
    /// Bounding boxes, `2 * dim` values per node: lows then highs.
    bounds: Vec<T>,
}

impl<T: Scalar> DistanceIndex<T> {
    /// Builds the tree. All cached distances start at `+inf` and every point
    /// starts unlabeled.
    pub fn build(points: &[T], dim: usize) -> Self {
        assert!(dim > 0 && points.len().is_multiple_of(dim));
        let n = points.len() / dim;
        assert!(n < NONE as usize, "pool too large for the distance index");
        let mut perm: Vec<u32> = (0..n as u32).collect();
        let mut index = DistanceIndex {
            dim,
            coords: Vec::new(),
            perm: Vec::new(),
            leaf_of: vec![NONE; n],
            nodes: Vec::with_capacity(2 * n / LEAF_SIZE + 2),
            bounds: Vec::new(),
        };
        if n > 0 {
            index.split(points, &mut perm, 0, n, NONE);
        }
        index.coords = perm
            .iter()
            .flat_map(|&i| {
                points[i as usize * dim..(i as usize + 1) * dim]
                    .iter()
                    .copied()
            })
            .collect();
        index.perm = perm;
        index
    }

    fn split(&mut self, points: &[T], perm: &mut [u32], lo: usize, hi: usize, parent: u32) -> u32 {
        let dim = self.dim;
        let id = self.nodes.len() as u32;
        let mut low = vec![T::infinity(); dim];
        let mut high = vec![T::neg_infinity(); dim];
        for &i in &perm[lo..hi] {
            let p = &points[i as usize * dim..(i as usize + 1) * dim];
            for j in 0..dim {
                low[j] = low[j].min(p[j]);
                high[j] = high[j].max(p[j]);
            }
        }
        self.bounds.extend_from_slice(&low);
        self.bounds.extend_from_slice(&high);
        let best_index = perm[lo..hi].iter().copied().min().unwrap_or(NONE);
        self.nodes.push(Node {
            lo: lo as u32,
            hi: hi as u32,
            left: NONE,
            right: NONE,
            parent,
            max_dist: T::infinity(),
            best_dist: T::infinity(),
            best_index,
        });
        if hi - lo <= LEAF_SIZE {
            for &i in &perm[lo..hi] {
                self.leaf_of[i as usize] = id;
            }
            return id;
        }
        let axis = (0..dim)
            .max_by(|&a, &b| {
                (high[a] - low[a])
                    .partial_cmp(&(high[b] - low[b]))
                    .unwrap_or(Ordering::Equal)
            })
            .unwrap_or(0);
        let mid = lo + (hi - lo) / 2;
        perm[lo..hi].select_nth_unstable_by(mid - lo, |&a, &b| {
            points[a as usize * dim + axis]
                .partial_cmp(&points[b as usize * dim + axis])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let left = self.split(points, perm, lo, mid, id);
        let right = self.split(points, perm, mid, hi, id);
        let node = &mut self.nodes[id as usize];
        node.left = left;
        node.right = right;
        id
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Smallest cached distance among unlabeled points, lowest index on ties.
    pub fn best_unlabeled(&self) -> Option<(T, usize)> {
        let root = self.nodes.first()?;
        (root.best_index != NONE).then_some((root.best_dist, root.best_index as usize))
    }

    #[inline]
    fn box_distance(&self, node: usize, x: &[T]) -> T {
        let base = 2 * self.dim * node;
        let low = &self.bounds[base..base + self.dim];
        let high = &self.bounds[base + self.dim..base + 2 * self.dim];
        let mut acc = T::zero();
        for j in 0..self.dim {
            let v = x[j];
            let gap = if v < low[j] {
                low[j] - v
            } else if v > high[j] {
                v - high[j]
            } else {
                T::zero()
            };
            acc = acc + gap * gap;
        }
        acc.sqrt()
    }

    /// Lowers `min_dist[i]` to the distance to `x` wherever that is smaller.
    pub fn add_positive(&mut self, x: &[T], min_dist: &mut [T], labeled: &[bool]) {
        if !self.nodes.is_empty() {
            self.insert(0, x, min_dist, labeled);
        }
    }

    fn insert(&mut self, node: usize, x: &[T], min_dist: &mut [T], labeled: &[bool]) -> bool {
        if self.box_distance(node, x) >= self.nodes[node].max_dist {
            return false;
        }
        let (left, right) = (self.nodes[node].left, self.nodes[node].right);
        if left == NONE {
            let (lo, hi) = (self.nodes[node].lo as usize, self.nodes[node].hi as usize);
            let mut changed = false;
            for pos in lo..hi {
                let d = euclidean(&self.coords[pos * self.dim..(pos + 1) * self.dim], x);
                let i = self.perm[pos] as usize;
                if d < min_dist[i] {
                    min_dist[i] = d;
                    changed = true;
                }
            }
            if changed {
                self.refresh_leaf(node, min_dist, labeled);
            }
            return changed;
        }
        let l = self.insert(left as usize, x, min_dist, labeled);
        let r = self.insert(right as usize, x, min_dist, labeled);
        if l || r {
            self.refresh_inner(node);
        }
        l || r
    }

    fn refresh_leaf(&mut self, node: usize, min_dist: &[T], labeled: &[bool]) {
        let (lo, hi) = (self.nodes[node].lo as usize, self.nodes[node].hi as usize);
        let mut max_dist = T::neg_infinity();
        let mut best = (T::infinity(), NONE);
        for &i in &self.perm[lo..hi] {
            let d = min_dist[i as usize];
            if d > max_dist {
                max_dist = d;
            }
            if !labeled[i as usize] && better((d, i), best) {
                best = (d, i);
            }
        }
        let n = &mut self.nodes[node];
        n.max_dist = max_dist;
        n.best_dist = best.0;
        n.best_index = best.1;
    }

    fn refresh_inner(&mut self, node: usize) {
        let (l, r) = (
            &self.nodes[self.nodes[node].left as usize],
            &self.nodes[self.nodes[node].right as usize],
        );
        let max_dist = if l.max_dist > r.max_dist {
            l.max_dist
        } else {
            r.max_dist
        };
        let lb = (l.best_dist, l.best_index);
        let rb = (r.best_dist, r.best_index);
        let best = if better(rb, lb) { rb } else { lb };
        let n = &mut self.nodes[node];
        n.max_dist = max_dist;
        n.best_dist = best.0;
        n.best_index = best.1;
    }

    /// Removes point `i` from the unlabeled aggregates; `labeled[i]` must
    /// already be set.
    pub fn mark_labeled(&mut self, i: usize, min_dist: &[T], labeled: &[bool]) {
        debug_assert!(labeled[i]);
        let mut node = self.leaf_of[i] as usize;
        self.refresh_leaf(node, min_dist, labeled);
        while self.nodes[node].parent != NONE {
            node = self.nodes[node].parent as usize;
            self.refresh_inner(node);
        }
    }

    /// Visits every unlabeled point with `min_dist <= radius`, in tree order.
    pub fn for_each_within(
        &self,
        radius: T,
        min_dist: &[T],
        labeled: &[bool],
        mut f: impl FnMut(usize),
    ) {
        if self.nodes.is_empty() {
            return;
        }
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            let nd = &self.nodes[node];
            if nd.best_index == NONE || nd.best_dist > radius {
                continue;
            }
            if nd.is_leaf() {
                for &i in &self.perm[nd.lo as usize..nd.hi as usize] {
                    let i = i as usize;
                    if !labeled[i] && min_dist[i] <= radius {
                        f(i);
                    }
                }
            } else {
                stack.push(nd.right as usize);
                stack.push(nd.left as usize);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(points: &[f64], dim: usize, positives: &[usize]) -> Vec<f64> {
        let n = points.len() / dim;
        (0..n)
            .map(|i| {
                positives
                    .iter()
                    .map(|&p| {
                        euclidean(
                            &points[i * dim..(i + 1) * dim],
                            &points[p * dim..(p + 1) * dim],
                        )
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    #[test]
    fn cache_and_argmin_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &(n, dim) in &[(1usize, 1usize), (7, 2), (200, 2), (300, 3), (150, 1)] {
            let points: Vec<f64> = (0..n * dim).map(|_| rng.random_range(-1.0..2.0)).collect();
            let mut index = DistanceIndex::build(&points, dim);
            let mut md = vec![f64::INFINITY; n];
            let mut labeled = vec![false; n];
            let mut positives = Vec::new();
            let mut order: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
            for (step, &i) in order.iter().enumerate() {
                labeled[i] = true;
                index.mark_labeled(i, &md, &labeled);
                if step % 3 != 1 {
                    positives.push(i);
                    index.add_positive(&points[i * dim..(i + 1) * dim], &mut md, &labeled);
                }
                assert_eq!(md, brute(&points, dim, &positives));
                let expected = (0..n).filter(|&j| !labeled[j]).map(|j| (md[j], j)).fold(
                    None,
                    |acc: Option<(f64, usize)>, c| match acc {
                        Some(a) if !(c.0 < a.0 || (c.0 == a.0 && c.1 < a.1)) => Some(a),
                        _ => Some(c),
                    },
                );
                assert_eq!(index.best_unlabeled(), expected);
                let r = 0.3;
                let mut within = Vec::new();
                index.for_each_within(r, &md, &labeled, |j| within.push(j));
                within.sort_unstable();
                let expected: Vec<usize> = (0..n).filter(|&j| !labeled[j] && md[j] <= r).collect();
                assert_eq!(within, expected);
            }
            assert_eq!(index.best_unlabeled(), None);
        }
    }

    #[test]
    fn duplicate_points_tie_break_on_index() {
        let points = vec![0.5f64; 40];
        let mut index = DistanceIndex::build(&points, 1);
        let mut md = vec![f64::INFINITY; 40];
        let mut labeled = vec![false; 40];
        labeled[17] = true;
        index.mark_labeled(17, &md, &labeled);
        index.add_positive(&[0.5], &mut md, &labeled);
        assert_eq!(index.best_unlabeled(), Some((0.0, 0)));
        labeled[0] = true;
        index.mark_labeled(0, &md, &labeled);
        assert_eq!(index.best_unlabeled(), Some((0.0, 1)));
    }
}
