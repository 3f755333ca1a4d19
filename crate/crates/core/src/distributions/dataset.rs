use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ground-truth membership of a pool point in the positive support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportFlag {
    Inside,
    Outside,
    Unknown,
}

impl SupportFlag {
    pub fn from_bool(inside: bool) -> Self {
        if inside {
            SupportFlag::Inside
        } else {
            SupportFlag::Outside
        }
    }

    pub fn known(self) -> Option<bool> {
        match self {
            SupportFlag::Inside => Some(true),
            SupportFlag::Outside => Some(false),
            SupportFlag::Unknown => None,
        }
    }
}

/// A realized pool: `n` points in `R^D` with labels and support flags.
///
/// Points are stored row-major in one flat buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    dim: usize,
    points: Vec<T>,
    labels: Vec<bool>,
    in_support: Vec<SupportFlag>,
    seed: Option<u64>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(
        dim: usize,
        points: Vec<T>,
        labels: Vec<bool>,
        in_support: Vec<SupportFlag>,
        seed: Option<u64>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::arg("dimension must be positive"));
        }
        let n = labels.len();
        if n == 0 {
            return Err(Error::arg("dataset must contain at least one point"));
        }
        if points.len() != n * dim || in_support.len() != n {
            return Err(Error::arg(format!(
                "inconsistent lengths: {} coordinates, {} labels, {} support flags for dim {}",
                points.len(),
                n,
                in_support.len(),
                dim
            )));
        }
        if let Some(i) = (0..n).find(|&i| labels[i] && in_support[i] == SupportFlag::Outside) {
            return Err(Error::arg(format!(
                "point {i} is labeled positive but lies outside the positive support"
            )));
        }
        Ok(Dataset {
            dim,
            points,
            labels,
            in_support,
            seed,
        })
    }

    /// Builds a dataset whose support flags are unknown.
    pub fn unlabeled_support(dim: usize, points: Vec<T>, labels: Vec<bool>) -> Result<Self> {
        let n = labels.len();
        Self::new(dim, points, labels, vec![SupportFlag::Unknown; n], None)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> bool {
        self.labels[i]
    }

    pub fn in_support(&self) -> &[SupportFlag] {
        &self.in_support
    }

    pub fn positive_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l).count()
    }

    /// Support membership for every point, if all flags are known.
    pub fn support_mask(&self) -> Option<Vec<bool>> {
        self.in_support.iter().map(|f| f.known()).collect()
    }

    pub fn support_known(&self) -> bool {
        self.in_support.iter().all(|f| *f != SupportFlag::Unknown)
    }
}
