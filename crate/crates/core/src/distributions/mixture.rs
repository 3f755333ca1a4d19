use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, SupportFlag};
use super::region::Region;
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};
use crate::scalar::Scalar;

/// Rejection-sampling attempts allowed per point before giving up.
pub const MAX_REJECTION_ATTEMPTS: usize = 1_000_000;

const WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Density<T> {
    /// Uniform over the component's region.
    Uniform,
    /// Axis-aligned Gaussian restricted to the component's region.
    TruncatedGaussian { mean: Vec<T>, std_dev: Vec<T> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec<T> {
    pub region: Region<T>,
    pub density: Density<T>,
    pub weight: f64,
}

impl<T: Scalar> ComponentSpec<T> {
    pub fn uniform(region: Region<T>, weight: f64) -> Self {
        ComponentSpec {
            region,
            density: Density::Uniform,
            weight,
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R, label: &str, out: &mut Vec<T>) -> Result<()> {
        for _ in 0..MAX_REJECTION_ATTEMPTS {
            let start = out.len();
            self.propose(rng, out);
            if self.region.contains(&out[start..]) {
                return Ok(());
            }
            out.truncate(start);
        }
        Err(Error::Sampling {
            component: label.to_string(),
            attempts: MAX_REJECTION_ATTEMPTS,
        })
    }

    fn propose<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<T>) {
        match (&self.density, &self.region) {
            (Density::Uniform, Region::Box { low, high }) => {
                for (l, h) in low.iter().zip(high) {
                    let u = T::of(rng.random::<f64>());
                    let v = *l + (*h - *l) * u;
                    out.push(v.max(*l).min(*h));
                }
            }
            (Density::Uniform, Region::Ball { center, radius }) => {
                let dim = center.len();
                let dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                let r = rng.random::<f64>().powf(1.0 / dim as f64);
                let scale = if norm > 0.0 { r / norm } else { 0.0 };
                for (c, d) in center.iter().zip(dir) {
                    out.push(*c + *radius * T::of(d * scale));
                }
            }
            (Density::TruncatedGaussian { mean, std_dev }, _) => {
                for (m, s) in mean.iter().zip(std_dev) {
                    let z: f64 = rng.sample(StandardNormal);
                    out.push(*m + *s * T::of(z));
                }
            }
        }
    }

    fn validate(&self, dim: usize, label: &str) -> Result<()> {
        self.region.validate()?;
        if self.region.dim() != dim {
            return Err(Error::arg(format!(
                "{label}: region dimension {} differs from {dim}",
                self.region.dim()
            )));
        }
        if !(self.weight > 0.0 && self.weight <= 1.0) {
            return Err(Error::arg(format!("{label}: weight must lie in (0, 1]")));
        }
        if let Density::TruncatedGaussian { mean, std_dev } = &self.density {
            if mean.len() != dim || std_dev.len() != dim {
                return Err(Error::arg(format!(
                    "{label}: Gaussian parameters must have length {dim}"
                )));
            }
            if std_dev.iter().any(|s| !(*s > T::zero())) {
                return Err(Error::arg(format!(
                    "{label}: standard deviations must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// The mixture `p * P+ + (1 - p) * P-` with explicit component supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec<T> {
    pub dim: usize,
    pub mixture_p: f64,
    pub positive_components: Vec<ComponentSpec<T>>,
    pub negative_components: Vec<ComponentSpec<T>>,
}

impl<T: Scalar> DistributionSpec<T> {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::arg("dimension must be positive"));
        }
        if !(self.mixture_p > 0.0 && self.mixture_p < 1.0) {
            return Err(Error::arg(format!(
                "mixture probability {} outside (0, 1)",
                self.mixture_p
            )));
        }
        for (side, comps) in [
            ("positive", &self.positive_components),
            ("negative", &self.negative_components),
        ] {
            if comps.is_empty() {
                return Err(Error::arg(format!("no {side} components")));
            }
            for (i, c) in comps.iter().enumerate() {
                c.validate(self.dim, &format!("{side} component {i}"))?;
            }
            let total: f64 = comps.iter().map(|c| c.weight).sum();
            if (total - 1.0).abs() > WEIGHT_TOLERANCE {
                return Err(Error::arg(format!(
                    "{side} component weights sum to {total}, not 1"
                )));
            }
        }
        Ok(())
    }

    /// Closed membership test for the positive support.
    pub fn contains_positive_support(&self, x: &[T]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::arg(format!(
                "point has {} coordinates, expected {}",
                x.len(),
                self.dim
            )));
        }
        Ok(self.in_positive_support(x))
    }

    fn in_positive_support(&self, x: &[T]) -> bool {
        self.positive_components
            .iter()
            .any(|c| c.region.contains(x))
    }

    /// Draws `n` i.i.d. points. Deterministic in `(self, n, seed)`.
    pub fn sample_dataset(&self, n: usize, seed: u64) -> Result<Dataset<T>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::arg("n must be at least 1"));
        }
        let mut rng = stream_rng(seed, Stream::Data);
        let mut points = Vec::with_capacity(n * self.dim);
        let mut labels = Vec::with_capacity(n);
        let mut flags = Vec::with_capacity(n);
        for _ in 0..n {
            let positive = rng.random::<f64>() < self.mixture_p;
            let (comps, side) = if positive {
                (&self.positive_components, "positive")
            } else {
                (&self.negative_components, "negative")
            };
            let k = pick_component(comps, rng.random::<f64>());
            let start = points.len();
            comps[k].draw(&mut rng, &format!("{side} component {k}"), &mut points)?;
            labels.push(positive);
            flags.push(SupportFlag::from_bool(
                self.in_positive_support(&points[start..]),
            ));
        }
        Dataset::new(self.dim, points, labels, flags, Some(seed))
    }

    /// Exact `P(X+)` when every component is uniform and positive components
    /// are pairwise disjoint.
    pub fn analytic_support_mass(&self) -> Option<f64> {
        let all_uniform = self
            .positive_components
            .iter()
            .chain(&self.negative_components)
            .all(|c| matches!(c.density, Density::Uniform));
        if !all_uniform {
            return None;
        }
        let mut negative_mass = 0.0;
        for neg in &self.negative_components {
            let overlap: f64 = self
                .positive_components
                .iter()
                .map(|pos| box_overlap_volume(&pos.region, &neg.region))
                .collect::<Option<Vec<f64>>>()?
                .iter()
                .sum();
            negative_mass += neg.weight * overlap / neg.region.volume();
        }
        Some(self.mixture_p + (1.0 - self.mixture_p) * negative_mass)
    }
}

fn pick_component<T>(comps: &[ComponentSpec<T>], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, c) in comps.iter().enumerate() {
        acc += c.weight;
        if u < acc {
            return i;
        }
    }
    comps.len() - 1
}

/// Overlap volume of a positive region with a negative box. Balls are only
/// handled when fully contained in the box.
fn box_overlap_volume<T: Scalar>(pos: &Region<T>, neg: &Region<T>) -> Option<f64> {
    let Region::Box { low: nl, high: nh } = neg else {
        return None;
    };
    match pos {
        Region::Box { low, high } => Some(
            low.iter()
                .zip(high)
                .zip(nl.iter().zip(nh))
                .map(|((l, h), (a, b))| (h.min(*b).as_f64() - l.max(*a).as_f64()).max(0.0))
                .product(),
        ),
        Region::Ball { center, radius } => {
            let inside = center
                .iter()
                .zip(nl.iter().zip(nh))
                .all(|(c, (a, b))| *c - *radius >= *a && *c + *radius <= *b);
            inside.then(|| pos.volume())
        }
    }
}
