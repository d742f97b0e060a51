//! Sampling-based motion planning with samplers and planners decoupled
//! behind small traits.
//!
//! An [`env::Environment`] answers validity queries over an occupancy grid,
//! a [`samplers::Sampler`] proposes configurations, and a
//! [`planners::Planner`] grows a tree or roadmap from them. The
//! [`registry::Registry`] maps names to factories so new planners and
//! samplers become selectable from config files without other changes.

pub mod bench;
pub mod cspace;
pub mod env;
pub mod error;
pub mod planners;
pub mod registry;
pub mod rng;
pub mod samplers;

pub use cspace::{Bounds, Configuration};
pub use error::{Error, Result};
pub use registry::Registry;
pub use rng::Rng;
