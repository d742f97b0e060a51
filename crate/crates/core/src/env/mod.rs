//! Environment backends and the collision-checking interface planners use.

mod arm;
mod grid;
mod point;
pub mod raster;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use arm::PlanarArmEnv;
pub use grid::{luminance, NetpbmFormat, OccupancyGrid, OBSTACLE_THRESHOLD};
pub use point::PointMassEnv;

use crate::cspace::{Bounds, Configuration};
use crate::error::{Error, Result};

/// Collision-check counters, monotone within one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckStats {
    pub config_checks: u64,
    pub motion_checks: u64,
    /// Configurations found in collision.
    pub invalid_obstacle: u64,
    /// Motions found in collision.
    pub invalid_connections: u64,
}

/// Geometry an environment exposes for rendering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvKind<'a> {
    PointMass,
    PlanarArm { base: (f64, f64), link_lengths: &'a [f64] },
}

/// A simulator backend: C-space bounds plus counted validity predicates.
pub trait Environment: Send {
    fn dim(&self) -> usize;

    fn bounds(&self) -> &Bounds;

    fn grid(&self) -> &OccupancyGrid;

    fn kind(&self) -> EnvKind<'_>;

    fn stats(&self) -> CheckStats;

    fn is_free_config(&mut self, q: &Configuration) -> Result<bool>;

    fn is_free_motion(&mut self, a: &Configuration, b: &Configuration) -> Result<bool>;

    /// Workspace points used to draw a configuration: the point itself for
    /// a point mass, the joint chain for an arm.
    fn workspace_points(&self, q: &Configuration) -> Result<Vec<(f64, f64)>>;
}

pub fn load_grid(bytes: &[u8], format: NetpbmFormat) -> Result<OccupancyGrid> {
    OccupancyGrid::from_netpbm_as(bytes, format)
}

pub(crate) fn check_dim(expected: usize, q: &Configuration) -> Result<()> {
    if q.dim() != expected {
        return Err(Error::DimensionMismatch { expected, got: q.dim() });
    }
    Ok(())
}

/// Counter bookkeeping shared by the concrete backends.
#[derive(Debug, Default)]
pub(crate) struct Counters(CheckStats);

impl Counters {
    fn config(&mut self, free: bool) -> bool {
        self.0.config_checks += 1;
        if !free {
            self.0.invalid_obstacle += 1;
        }
        free
    }

    fn motion(&mut self, free: bool) -> bool {
        self.0.motion_checks += 1;
        if !free {
            self.0.invalid_connections += 1;
        }
        free
    }
}

pub(crate) type SharedGrid = Arc<OccupancyGrid>;
