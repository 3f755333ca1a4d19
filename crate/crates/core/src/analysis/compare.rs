use serde::{Deserialize, Serialize};

use super::sweep::SweepResult;
use crate::error::{Error, Result};
use crate::learners::LearnerKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonEntry {
    pub kind: LearnerKind,
    pub mean_excess: f64,
    pub ci95: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairComparison {
    /// Kind with the smaller mean excess.
    pub lower: LearnerKind,
    pub higher: LearnerKind,
    /// Both intervals exist and do not intersect.
    pub disjoint: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub n: usize,
    /// Sorted by mean excess, ascending.
    pub entries: Vec<ComparisonEntry>,
    pub pairs: Vec<PairComparison>,
    /// Full ranking, present only when every pair of intervals is disjoint.
    pub strict_order: Option<Vec<LearnerKind>>,
}

impl ComparisonReport {
    pub fn pair(&self, a: LearnerKind, b: LearnerKind) -> Option<&PairComparison> {
        self.pairs
            .iter()
            .find(|p| (p.lower == a && p.higher == b) || (p.lower == b && p.higher == a))
    }

    /// `a` has strictly smaller excess than `b` with disjoint intervals.
    pub fn strictly_below(&self, a: LearnerKind, b: LearnerKind) -> bool {
        self.pair(a, b).is_some_and(|p| p.disjoint && p.lower == a)
    }
}

fn disjoint(a: Option<(f64, f64)>, b: Option<(f64, f64)>) -> bool {
    match (a, b) {
        (Some((alo, ahi)), Some((blo, bhi))) => ahi < blo || bhi < alo,
        _ => false,
    }
}

pub fn compare_learners(sweeps: &[SweepResult], at_n: usize) -> Result<ComparisonReport> {
    let mut entries = sweeps
        .iter()
        .map(|s| {
            s.row(at_n)
                .map(|r| ComparisonEntry {
                    kind: s.kind,
                    mean_excess: r.mean_excess,
                    ci95: r.ci95,
                })
                .ok_or_else(|| Error::arg(format!("{} sweep has no row at n = {at_n}", s.kind)))
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| {
        a.mean_excess
            .total_cmp(&b.mean_excess)
            .then(a.kind.cmp(&b.kind))
    });
    let mut pairs = Vec::new();
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            pairs.push(PairComparison {
                lower: entries[i].kind,
                higher: entries[j].kind,
                disjoint: disjoint(entries[i].ci95, entries[j].ci95),
            });
        }
    }
    let strict_order = (entries.len() >= 2 && pairs.iter().all(|p| p.disjoint))
        .then(|| entries.iter().map(|e| e.kind).collect());
    Ok(ComparisonReport {
        n: at_n,
        entries,
        pairs,
        strict_order,
    })
}
