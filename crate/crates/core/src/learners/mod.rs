//! Query strategies for active covering.

mod config;
mod index;
mod learner;
pub mod reference;
mod state;

pub use config::{epsilon_radius, recommended_m, LearnerConfig, LearnerKind};
pub use index::DistanceIndex;
pub use learner::{Learner, Pool, Query, QueryStrategy};
pub use state::{min_dist_update, ActiveSetView, LearnerState, Phase, UnlabeledSet};
