//! Mixture distributions with known positive support, dataset sampling and
//! CSV ingest.

mod csv;
mod dataset;
mod mixture;
mod preset;
mod region;

pub use self::csv::{load_dataset, read_dataset, write_dataset, SUPPORT_COLUMN};
pub use dataset::{Dataset, SupportFlag};
pub use mixture::{ComponentSpec, Density, DistributionSpec, MAX_REJECTION_ATTEMPTS};
pub use preset::{make_preset, positive_support_components, Preset};
pub use region::{unit_ball_volume, Region};
