//! Dataset CSV: `D` coordinate columns followed by an integer label column
//! (`1` positive, `0` negative). An optional header line is allowed, as are
//! `#` comment lines. Files written by [`write_dataset`] may carry a trailing
//! `in_support` column, which is recognised by its header name and skipped.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const SUPPORT_COLUMN: &str = "in_support";

pub fn load_dataset<T: Scalar>(path: impl AsRef<Path>) -> Result<Dataset<T>> {
    let file = File::open(path)?;
    read_dataset(BufReader::new(file))
}

pub fn read_dataset<T: Scalar, R: BufRead>(reader: R) -> Result<Dataset<T>> {
    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut dim: Option<usize> = None;
    let mut skip_trailing = false;
    let mut seen_first = false;
    let mut row = 0usize;

    for (line_no, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if !seen_first {
            seen_first = true;
            if cells.iter().all(|c| c.parse::<f64>().is_err()) {
                skip_trailing = cells.last() == Some(&SUPPORT_COLUMN);
                continue;
            }
        }
        row += 1;
        let fail = |message: String| Error::Format {
            row,
            message: format!("{message} (line {})", line_no + 1),
        };

        let value_cells = if skip_trailing {
            &cells[..cells.len().saturating_sub(1)]
        } else {
            &cells[..]
        };
        if value_cells.len() < 2 {
            return Err(fail("missing label column".into()));
        }
        let d = value_cells.len() - 1;
        match dim {
            None => dim = Some(d),
            Some(expected) if expected != d => {
                return Err(fail(format!("expected {expected} coordinates, found {d}")));
            }
            _ => {}
        }
        for (col, cell) in value_cells[..d].iter().enumerate() {
            let v: T = cell
                .parse()
                .map_err(|_| fail(format!("column {} is not numeric: '{cell}'", col + 1)))?;
            points.push(v);
        }
        let label = match value_cells[d] {
            "1" => true,
            "0" => false,
            other => return Err(fail(format!("label must be 0 or 1, found '{other}'"))),
        };
        labels.push(label);
    }

    let dim = dim.ok_or(Error::Format {
        row: 0,
        message: "file contains no data rows".into(),
    })?;
    Dataset::unlabeled_support(dim, points, labels)
}

/// Writes a dataset with a header row. When `with_support` is set and all
/// flags are known, an `in_support` column (1/0) is appended.
pub fn write_dataset<T: Scalar, W: Write>(
    ds: &Dataset<T>,
    mut out: W,
    with_support: bool,
) -> Result<()> {
    let support = if with_support {
        ds.support_mask()
    } else {
        None
    };
    let mut header: Vec<String> = (0..ds.dim()).map(|j| format!("x{j}")).collect();
    header.push("label".into());
    if support.is_some() {
        header.push(SUPPORT_COLUMN.into());
    }
    writeln!(out, "{}", header.join(","))?;
    let mut line = String::new();
    for i in 0..ds.n() {
        line.clear();
        for v in ds.point(i) {
            line.push_str(&v.to_string());
            line.push(',');
        }
        line.push(if ds.label(i) { '1' } else { '0' });
        if let Some(mask) = &support {
            line.push(',');
            line.push(if mask[i] { '1' } else { '0' });
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
