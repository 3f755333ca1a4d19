//! Multi-trial aggregation, power-law rate fits and learner comparison.

mod compare;
mod csv;
mod fit;
mod sweep;

pub use self::csv::{
    read_sweep_csv, write_rate_fit_csv, write_sweep_csv, RateFitRow, RATE_FIT_HEADER, SWEEP_HEADER,
};
pub use compare::{compare_learners, ComparisonEntry, ComparisonReport, PairComparison};
pub use fit::{fit_power_law, theoretical_exponent, RateFit, Z95};
pub use sweep::{summarize_rows, summarize_sweep, SweepResult, SweepRow};
