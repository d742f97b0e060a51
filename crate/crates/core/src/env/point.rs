use std::sync::Arc;

use super::raster::supercover;
use super::{check_dim, CheckStats, Counters, EnvKind, Environment, OccupancyGrid, SharedGrid};
use crate::cspace::{Bounds, Configuration};
use crate::error::Result;

/// A point robot moving over the image plane, in pixel coordinates.
///
/// Motions are checked exactly: every pixel the straight segment touches
/// (its supercover) must be free.
#[derive(Debug)]
pub struct PointMassEnv {
    grid: SharedGrid,
    bounds: Bounds,
    counters: Counters,
}

impl PointMassEnv {
    pub fn new(grid: Arc<OccupancyGrid>) -> Self {
        let bounds = Bounds::new([(0.0, grid.width() as f64), (0.0, grid.height() as f64)])
            .expect("grid dimensions are positive");
        Self {
            grid,
            bounds,
            counters: Counters::default(),
        }
    }

    fn point_free(&self, x: f64, y: f64) -> bool {
        !self.grid.is_occupied(x.floor() as i64, y.floor() as i64)
    }

    fn segment_free(&self, a: &Configuration, b: &Configuration) -> bool {
        supercover((a[0], a[1]), (b[0], b[1]), |x, y| !self.grid.is_occupied(x, y))
    }
}

impl Environment for PointMassEnv {
    fn dim(&self) -> usize {
        2
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    fn kind(&self) -> EnvKind<'_> {
        EnvKind::PointMass
    }

    fn stats(&self) -> CheckStats {
        self.counters.0
    }

    fn is_free_config(&mut self, q: &Configuration) -> Result<bool> {
        check_dim(2, q)?;
        let free = self.point_free(q[0], q[1]);
        Ok(self.counters.config(free))
    }

    fn is_free_motion(&mut self, a: &Configuration, b: &Configuration) -> Result<bool> {
        check_dim(2, a)?;
        check_dim(2, b)?;
        let free = self.segment_free(a, b);
        Ok(self.counters.motion(free))
    }

    fn workspace_points(&self, q: &Configuration) -> Result<Vec<(f64, f64)>> {
        check_dim(2, q)?;
        Ok(vec![(q[0], q[1])])
    }
}
