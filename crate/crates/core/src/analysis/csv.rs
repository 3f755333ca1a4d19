//! Plot-ready CSV tables. Each file may begin with one `#` metadata line.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::fit::{theoretical_exponent, RateFit};
use super::sweep::{SweepResult, SweepRow};
use crate::error::{Error, Result};
use crate::learners::LearnerKind;

pub const SWEEP_HEADER: &str =
    "kind,D,n,trials,mean_excess,std_excess,ci_low,ci_high,mean_auc,mean_Q";
pub const RATE_FIT_HEADER: &str =
    "kind,D,slope,slope_ci_low,slope_ci_high,intercept,r_squared,theoretical_exponent";

fn write_meta<W: Write>(out: &mut W, meta: &str) -> Result<()> {
    if !meta.is_empty() {
        writeln!(out, "# {meta}")?;
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(sweeps: &[SweepResult], meta: &str, mut out: W) -> Result<()> {
    write_meta(&mut out, meta)?;
    writeln!(out, "{SWEEP_HEADER}")?;
    for s in sweeps {
        for r in &s.rows {
            let (lo, hi) = match r.ci95 {
                Some((lo, hi)) => (lo.to_string(), hi.to_string()),
                None => (String::new(), String::new()),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                s.kind,
                s.dim,
                r.n,
                r.trials,
                r.mean_excess,
                r.std_excess,
                lo,
                hi,
                r.mean_auc,
                r.mean_q
            )?;
        }
    }
    Ok(())
}

/// Parses a sweep CSV into one [`SweepResult`] per `(kind, D)`, rows sorted by `n`.
pub fn read_sweep_csv<R: BufRead>(reader: R) -> Result<Vec<SweepResult>> {
    let mut groups: BTreeMap<(LearnerKind, usize), Vec<SweepRow>> = BTreeMap::new();
    let mut header_seen = false;
    let mut row = 0;
    for line in reader.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != SWEEP_HEADER {
                return Err(Error::Format {
                    row: 0,
                    message: format!("expected header '{SWEEP_HEADER}', found '{line}'"),
                });
            }
            header_seen = true;
            continue;
        }
        row += 1;
        let cells: Vec<&str> = line.split(',').collect();
        let fail = |message: String| Error::Format { row, message };
        if cells.len() != 10 {
            return Err(fail(format!("expected 10 columns, found {}", cells.len())));
        }
        let num = |i: usize| -> Result<f64> {
            cells[i]
                .parse::<f64>()
                .map_err(|_| fail(format!("column {} is not numeric: '{}'", i + 1, cells[i])))
        };
        let int = |i: usize| -> Result<usize> {
            cells[i].parse::<usize>().map_err(|_| {
                fail(format!(
                    "column {} is not an integer: '{}'",
                    i + 1,
                    cells[i]
                ))
            })
        };
        let kind: LearnerKind = cells[0].parse().map_err(|e: Error| fail(e.to_string()))?;
        let ci95 = if cells[6].is_empty() && cells[7].is_empty() {
            None
        } else {
            Some((num(6)?, num(7)?))
        };
        groups.entry((kind, int(1)?)).or_default().push(SweepRow {
            n: int(2)?,
            trials: int(3)?,
            mean_excess: num(4)?,
            std_excess: num(5)?,
            ci95,
            mean_auc: num(8)?,
            mean_q: num(9)?,
        });
    }
    if !header_seen {
        return Err(Error::Format {
            row: 0,
            message: "empty sweep file".into(),
        });
    }
    Ok(groups
        .into_iter()
        .map(|((kind, dim), mut rows)| {
            rows.sort_by_key(|r| r.n);
            SweepResult { kind, dim, rows }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateFitRow {
    pub kind: LearnerKind,
    pub dim: usize,
    pub fit: RateFit,
}

impl RateFitRow {
    pub fn theoretical(&self) -> f64 {
        theoretical_exponent(self.kind, self.dim)
    }
}

pub fn write_rate_fit_csv<W: Write>(rows: &[RateFitRow], meta: &str, mut out: W) -> Result<()> {
    write_meta(&mut out, meta)?;
    writeln!(out, "{RATE_FIT_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.kind,
            r.dim,
            r.fit.slope,
            r.fit.slope_ci95.0,
            r.fit.slope_ci95.1,
            r.fit.intercept,
            r.fit.r_squared,
            r.theoretical()
        )?;
    }
    Ok(())
}
