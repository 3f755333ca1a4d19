use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A compact region of `R^D`. Membership is closed: boundary points belong.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region<T> {
    Box { low: Vec<T>, high: Vec<T> },
    Ball { center: Vec<T>, radius: T },
}

impl<T: Scalar> Region<T> {
    pub fn new_box(low: Vec<T>, high: Vec<T>) -> Result<Self> {
        let region = Region::Box { low, high };
        region.validate()?;
        Ok(region)
    }

    pub fn new_ball(center: Vec<T>, radius: T) -> Result<Self> {
        let region = Region::Ball { center, radius };
        region.validate()?;
        Ok(region)
    }

    /// Unit cube `[0,1]^dim`.
    pub fn unit_cube(dim: usize) -> Self {
        Region::Box {
            low: vec![T::zero(); dim],
            high: vec![T::one(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Box { low, .. } => low.len(),
            Region::Ball { center, .. } => center.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Region::Box { low, high } => {
                if low.is_empty() || low.len() != high.len() {
                    return Err(Error::arg(format!(
                        "box bounds have lengths {} and {}",
                        low.len(),
                        high.len()
                    )));
                }
                if let Some(axis) = low.iter().zip(high).position(|(l, h)| !(*l < *h)) {
                    return Err(Error::arg(format!("box axis {axis} has low >= high")));
                }
            }
            Region::Ball { center, radius } => {
                if center.is_empty() {
                    return Err(Error::arg("ball center is empty"));
                }
                if !(*radius > T::zero()) || !radius.is_finite() {
                    return Err(Error::arg("ball radius must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, x: &[T]) -> bool {
        match self {
            Region::Box { low, high } => x
                .iter()
                .zip(low.iter().zip(high))
                .all(|(v, (l, h))| *l <= *v && *v <= *h),
            Region::Ball { center, radius } => crate::scalar::euclidean(center, x) <= *radius,
        }
    }

    /// Lebesgue volume of the region.
    pub fn volume(&self) -> f64 {
        match self {
            Region::Box { low, high } => low
                .iter()
                .zip(high)
                .map(|(l, h)| (*h - *l).as_f64())
                .product(),
            Region::Ball { center, radius } => {
                unit_ball_volume(center.len()) * radius.as_f64().powi(center.len() as i32)
            }
        }
    }
}

/// Volume of the unit ball in `R^d` via the recurrence `V_d = V_{d-2} * 2π / d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * 2.0 * std::f64::consts::PI / d as f64,
    }
}
