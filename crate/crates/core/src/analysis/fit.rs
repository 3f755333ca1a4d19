use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::LearnerKind;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Ordinary least-squares fit of `ln(mean) = intercept + slope * ln(n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_ci95: (f64, f64),
    pub points_used: usize,
    /// `n` values dropped because their mean was not positive.
    pub dropped: Vec<f64>,
}

pub fn fit_power_law(ns: &[f64], means: &[f64]) -> Result<RateFit> {
    if ns.len() != means.len() {
        return Err(Error::arg("ns and means differ in length"));
    }
    let mut dropped = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&n, &m) in ns.iter().zip(means) {
        if m > 0.0 && m.is_finite() && n > 0.0 {
            xs.push(n.ln());
            ys.push(m.ln());
        } else {
            dropped.push(n);
        }
    }
    let mut distinct = xs.clone();
    distinct.sort_by(|a, b| a.total_cmp(b));
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least 3 distinct n with positive mean, got {}",
            distinct.len()
        )));
    }
    let k = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / k;
    let y_mean = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let syy: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let se = (sse / (k - 2.0) / sxx).sqrt();
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        slope_ci95: (slope - Z95 * se, slope + Z95 * se),
        points_used: xs.len(),
        dropped,
    })
}

/// Polynomial exponent of the expected excess cost, ignoring log factors:
/// passive `1`, offline `D/(D+1)`, active learners `(D-1)/D`, oracles `0`.
pub fn theoretical_exponent(kind: LearnerKind, dim: usize) -> f64 {
    let d = dim as f64;
    match kind {
        LearnerKind::Passive => 1.0,
        LearnerKind::Offline => d / (d + 1.0),
        LearnerKind::ExploreCommit | LearnerKind::Ucb => (d - 1.0) / d,
        LearnerKind::OracleGreedy | LearnerKind::OracleUniform => 0.0,
    }
}
