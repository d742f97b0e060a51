use std::f64::consts::PI;
use std::sync::Arc;

use super::raster::supercover;
use super::{check_dim, CheckStats, Counters, EnvKind, Environment, OccupancyGrid, SharedGrid};
use crate::cspace::{dist, lerp, Bounds, Configuration};
use crate::error::{contract, Result};

/// Fixed-base planar serial arm over an occupancy grid.
///
/// Configurations are joint angles in radians, bounded to `[-pi, pi]`.
/// Links are zero-thickness segments; a configuration is free iff the
/// supercover of every link lies on free pixels. Self-collision is ignored.
#[derive(Debug)]
pub struct PlanarArmEnv {
    grid: SharedGrid,
    base: (f64, f64),
    link_lengths: Vec<f64>,
    bounds: Bounds,
    /// Joint-space step bounding any link point's displacement to 1 px.
    joint_resolution: f64,
    counters: Counters,
}

impl PlanarArmEnv {
    pub fn new(grid: Arc<OccupancyGrid>, base: (f64, f64), link_lengths: Vec<f64>) -> Result<Self> {
        if link_lengths.len() < 2 {
            return Err(contract(format!(
                "arm needs at least 2 links, got {}",
                link_lengths.len()
            )));
        }
        if let Some(l) = link_lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(contract(format!("link lengths must be positive, got {l}")));
        }
        let (bx, by) = base;
        if !(bx.is_finite() && by.is_finite())
            || bx < 0.0
            || by < 0.0
            || bx >= grid.width() as f64
            || by >= grid.height() as f64
        {
            return Err(contract(format!(
                "arm base ({bx}, {by}) lies outside the {}x{} grid",
                grid.width(),
                grid.height()
            )));
        }
        let bounds = Bounds::new(link_lengths.iter().map(|_| (-PI, PI)))?;
        let joint_resolution = 1.0 / link_lengths.iter().sum::<f64>();
        Ok(Self {
            grid,
            base,
            link_lengths,
            bounds,
            joint_resolution,
            counters: Counters::default(),
        })
    }

    pub fn base(&self) -> (f64, f64) {
        self.base
    }

    pub fn link_lengths(&self) -> &[f64] {
        &self.link_lengths
    }

    pub fn joint_resolution(&self) -> f64 {
        self.joint_resolution
    }

    /// Joint positions `p_0 = base, ..., p_d` using cumulative angles, with
    /// the image y axis pointing down.
    pub fn forward_kinematics(&self, q: &Configuration) -> Result<Vec<(f64, f64)>> {
        check_dim(self.link_lengths.len(), q)?;
        Ok(self.chain(q.as_slice()))
    }

    fn chain(&self, angles: &[f64]) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(angles.len() + 1);
        let (mut x, mut y) = self.base;
        let mut theta = 0.0;
        pts.push((x, y));
        for (a, l) in angles.iter().zip(&self.link_lengths) {
            theta += a;
            x += l * theta.cos();
            y += l * theta.sin();
            pts.push((x, y));
        }
        pts
    }

    fn angles_free(&self, angles: &[f64]) -> bool {
        let pts = self.chain(angles);
        pts.windows(2)
            .all(|w| supercover(w[0], w[1], |x, y| !self.grid.is_occupied(x, y)))
    }
}

impl Environment for PlanarArmEnv {
    fn dim(&self) -> usize {
        self.link_lengths.len()
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn grid(&self) -> &OccupancyGrid {
        &self.grid
    }

    fn kind(&self) -> EnvKind<'_> {
        EnvKind::PlanarArm {
            base: self.base,
            link_lengths: &self.link_lengths,
        }
    }

    fn stats(&self) -> CheckStats {
        self.counters.0
    }

    fn is_free_config(&mut self, q: &Configuration) -> Result<bool> {
        check_dim(self.dim(), q)?;
        let free = self.angles_free(q.as_slice());
        Ok(self.counters.config(free))
    }

    fn is_free_motion(&mut self, a: &Configuration, b: &Configuration) -> Result<bool> {
        check_dim(self.dim(), a)?;
        check_dim(self.dim(), b)?;
        let (a, b) = (a.as_slice(), b.as_slice());
        let steps = ((dist(a, b) / self.joint_resolution).ceil() as usize).max(1);
        let free = (0..=steps).all(|k| {
            // index from `a` when k is small and from `b` otherwise so both
            // directions evaluate the same configurations
            if 2 * k <= steps {
                self.angles_free(&lerp(a, b, k as f64 / steps as f64))
            } else {
                self.angles_free(&lerp(b, a, (steps - k) as f64 / steps as f64))
            }
        });
        Ok(self.counters.motion(free))
    }

    fn workspace_points(&self, q: &Configuration) -> Result<Vec<(f64, f64)>> {
        self.forward_kinematics(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: &[f64]) -> Configuration {
        Configuration::new(v.to_vec()).unwrap()
    }

    fn empty_arm(base: (f64, f64), links: Vec<f64>) -> PlanarArmEnv {
        PlanarArmEnv::new(Arc::new(OccupancyGrid::empty(100, 100).unwrap()), base, links).unwrap()
    }

    fn close(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
        a.len() == b.len()
            && a.iter()
                .zip(b)
                .all(|(p, r)| (p.0 - r.0).abs() < 1e-9 && (p.1 - r.1).abs() < 1e-9)
    }

    #[test]
    fn forward_kinematics_examples() {
        let arm = empty_arm((50.0, 50.0), vec![10.0, 10.0]);
        let p = arm.forward_kinematics(&q(&[0.0, 0.0])).unwrap();
        assert!(close(&p, &[(50.0, 50.0), (60.0, 50.0), (70.0, 50.0)]));
        let p = arm.forward_kinematics(&q(&[PI / 2.0, -PI / 2.0])).unwrap();
        assert!(close(&p, &[(50.0, 50.0), (50.0, 60.0), (60.0, 60.0)]));
        assert!(arm.forward_kinematics(&q(&[0.0])).is_err());
    }

    #[test]
    fn half_turn_single_link_chain() {
        // construction requires >= 2 links; the chain itself is link-count agnostic
        let arm = empty_arm((0.0, 0.0), vec![5.0, 1.0]);
        let p = arm.chain(&[PI]);
        assert!(close(&p, &[(0.0, 0.0), (-5.0, 0.0)]));
    }

    #[test]
    fn construction_errors() {
        let grid = Arc::new(OccupancyGrid::empty(10, 10).unwrap());
        assert!(PlanarArmEnv::new(grid.clone(), (5.0, 5.0), vec![1.0]).is_err());
        assert!(PlanarArmEnv::new(grid.clone(), (5.0, 5.0), vec![1.0, 0.0]).is_err());
        assert!(PlanarArmEnv::new(grid.clone(), (10.0, 5.0), vec![1.0, 1.0]).is_err());
        assert!(PlanarArmEnv::new(grid, (-0.5, 5.0), vec![1.0, 1.0]).is_err());
    }

    /// Independent oracle: rasterize each link by dense point sampling.
    fn sampled_link_pixels(p0: (f64, f64), p1: (f64, f64)) -> Vec<(i64, i64)> {
        (0..=2000)
            .map(|k| {
                let t = k as f64 / 2000.0;
                (
                    (p0.0 + t * (p1.0 - p0.0)).floor() as i64,
                    (p0.1 + t * (p1.1 - p0.1)).floor() as i64,
                )
            })
            .collect()
    }

    #[test]
    fn wall_blocks_second_link() {
        let grid = Arc::new(OccupancyGrid::from_fn(100, 100, |x, _| x == 65).unwrap());
        let mut arm = PlanarArmEnv::new(grid.clone(), (50.0, 50.0), vec![10.0, 10.0]).unwrap();
        let pts = arm.forward_kinematics(&q(&[0.0, 0.0])).unwrap();
        let first_hits = sampled_link_pixels(pts[0], pts[1])
            .iter()
            .any(|&(x, y)| grid.is_occupied(x, y));
        let second_hits = sampled_link_pixels(pts[1], pts[2])
            .iter()
            .any(|&(x, y)| grid.is_occupied(x, y));
        assert!(!first_hits && second_hits);
        assert!(!arm.is_free_config(&q(&[0.0, 0.0])).unwrap());
        // folded up, the arm stays clear of the wall
        assert!(arm.is_free_config(&q(&[-PI / 2.0, 0.0])).unwrap());
    }

    #[test]
    fn outside_grid_is_collision() {
        let mut arm = empty_arm((5.0, 50.0), vec![10.0, 10.0]);
        assert!(!arm.is_free_config(&q(&[PI, 0.0])).unwrap());
        assert!(arm.is_free_config(&q(&[0.0, 0.0])).unwrap());
    }

    #[test]
    fn swept_motion_hits_obstacle_between_endpoints() {
        // a post directly above the base; both endpoints clear it, the sweep does not
        let grid = Arc::new(OccupancyGrid::from_fn(100, 100, |x, y| x == 50 && (30..35).contains(&y)).unwrap());
        let mut arm = PlanarArmEnv::new(grid, (50.5, 50.5), vec![10.0, 10.0]).unwrap();
        let a = q(&[-PI / 2.0 - 0.5, 0.0]);
        let b = q(&[-PI / 2.0 + 0.5, 0.0]);
        assert!(arm.is_free_config(&a).unwrap());
        assert!(arm.is_free_config(&b).unwrap());
        assert!(!arm.is_free_motion(&a, &b).unwrap());
        assert!(!arm.is_free_motion(&b, &a).unwrap());
    }

    #[test]
    fn joint_resolution_bounds_tip_displacement() {
        let arm = empty_arm((50.0, 50.0), vec![10.0, 15.0, 5.0]);
        assert!((arm.joint_resolution() - 1.0 / 30.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn chain_link_lengths(angles in prop::collection::vec(-PI..PI, 4), links in prop::collection::vec(0.5..30.0f64, 4)) {
            let arm = empty_arm((50.0, 50.0), links.clone());
            let pts = arm.forward_kinematics(&q(&angles)).unwrap();
            prop_assert_eq!(pts.len(), 5);
            for (w, l) in pts.windows(2).zip(&links) {
                let len = ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt();
                prop_assert!((len - l).abs() < 1e-9);
            }
        }
    }
}
