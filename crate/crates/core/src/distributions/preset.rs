use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::mixture::{ComponentSpec, DistributionSpec};
use super::region::Region;
use crate::error::{Error, Result};
use crate::scalar::{euclidean, Scalar};

/// Built-in benchmark geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Positives uniform on `[0,1]^D`, negatives uniform on `[-1,2]^D`.
    CubeOverlap,
    /// Positives uniform on `[0,1]^D` and `[3,4] x [0,1]^{D-1}` (equal weight),
    /// negatives uniform on `[-1,5] x [-1,2]^{D-1}`.
    TwoClusters,
    /// Positives uniform on the unit ball, negatives uniform on `[-3,3]^D`.
    BallInSea,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::CubeOverlap, Preset::TwoClusters, Preset::BallInSea];

    pub fn name(self) -> &'static str {
        match self {
            Preset::CubeOverlap => "cube-overlap",
            Preset::TwoClusters => "two-clusters",
            Preset::BallInSea => "ball-in-sea",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::arg(format!("unknown preset '{s}'")))
    }
}

fn cube<T: Scalar>(dim: usize, low: f64, high: f64) -> Region<T> {
    Region::Box {
        low: vec![T::of(low); dim],
        high: vec![T::of(high); dim],
    }
}

fn shifted_box<T: Scalar>(dim: usize, first: (f64, f64), rest: (f64, f64)) -> Region<T> {
    let mut low = vec![T::of(rest.0); dim];
    let mut high = vec![T::of(rest.1); dim];
    low[0] = T::of(first.0);
    high[0] = T::of(first.1);
    Region::Box { low, high }
}

pub fn make_preset<T: Scalar>(preset: Preset, dim: usize, p: f64) -> Result<DistributionSpec<T>> {
    if dim == 0 {
        return Err(Error::arg("dimension must be positive"));
    }
    let (positive_components, negative_components) = match preset {
        Preset::CubeOverlap => (
            vec![ComponentSpec::uniform(cube(dim, 0.0, 1.0), 1.0)],
            vec![ComponentSpec::uniform(cube(dim, -1.0, 2.0), 1.0)],
        ),
        Preset::TwoClusters => (
            vec![
                ComponentSpec::uniform(cube(dim, 0.0, 1.0), 0.5),
                ComponentSpec::uniform(shifted_box(dim, (3.0, 4.0), (0.0, 1.0)), 0.5),
            ],
            vec![ComponentSpec::uniform(
                shifted_box(dim, (-1.0, 5.0), (-1.0, 2.0)),
                1.0,
            )],
        ),
        Preset::BallInSea => (
            vec![ComponentSpec::uniform(
                Region::Ball {
                    center: vec![T::zero(); dim],
                    radius: T::one(),
                },
                1.0,
            )],
            vec![ComponentSpec::uniform(cube(dim, -3.0, 3.0), 1.0)],
        ),
    };
    let spec = DistributionSpec {
        dim,
        mixture_p: p,
        positive_components,
        negative_components,
    };
    spec.validate()?;
    Ok(spec)
}

fn regions_touch<T: Scalar>(a: &Region<T>, b: &Region<T>) -> bool {
    match (a, b) {
        (Region::Box { low: al, high: ah }, Region::Box { low: bl, high: bh }) => al
            .iter()
            .zip(ah)
            .zip(bl.iter().zip(bh))
            .all(|((l1, h1), (l2, h2))| *l1 <= *h2 && *l2 <= *h1),
        (
            Region::Ball {
                center: c1,
                radius: r1,
            },
            Region::Ball {
                center: c2,
                radius: r2,
            },
        ) => euclidean(c1, c2) <= *r1 + *r2,
        (Region::Ball { center, radius }, Region::Box { low, high })
        | (Region::Box { low, high }, Region::Ball { center, radius }) => {
            let nearest: Vec<T> = center
                .iter()
                .zip(low.iter().zip(high))
                .map(|(c, (l, h))| c.max(*l).min(*h))
                .collect();
            euclidean(center, &nearest) <= *radius
        }
    }
}

/// Number of connected components of the positive support, treating each
/// component region as connected and merging regions that intersect.
pub fn positive_support_components<T: Scalar>(spec: &DistributionSpec<T>) -> usize {
    let regions: Vec<&Region<T>> = spec.positive_components.iter().map(|c| &c.region).collect();
    let mut parent: Vec<usize> = (0..regions.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..regions.len() {
        for j in i + 1..regions.len() {
            if regions_touch(regions[i], regions[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..regions.len())
        .filter(|&i| find(&mut parent, i) == i)
        .count()
}
