//! Planners: RRT, RRT*, RRT-Connect and PRM behind one [`Planner`] trait.
//!
//! A planner receives its environment, sampler and random stream through a
//! [`PlanRequest`] and never constructs them itself. `max_nodes` bounds the
//! number of samples drawn, for every planner.

pub mod nn;
mod prm;
mod rrt;
mod rrt_connect;
mod rrt_star;
mod tree;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use prm::Prm;
pub use rrt::Rrt;
pub use rrt_connect::RrtConnect;
pub use rrt_star::RrtStar;
pub use tree::{MotionTree, Node, Roadmap};

use crate::cspace::{dist, path_length, Configuration};
use crate::env::{CheckStats, Environment};
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::samplers::{Sampler, SamplerContext};

/// Numeric knobs shared by all planners; each planner reads the ones it uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerParams {
    /// Sample budget.
    pub max_nodes: usize,
    /// Steering step.
    pub eps: f64,
    pub goal_radius: f64,
    /// Scales the RRT* neighbourhood constant.
    pub rewire_multiplier: f64,
    /// PRM neighbour count.
    pub prm_k: usize,
}

impl Default for PlannerParams {
    fn default() -> Self {
        Self {
            max_nodes: 2000,
            eps: 10.0,
            goal_radius: 10.0,
            rewire_multiplier: 6.0,
            prm_k: 10,
        }
    }
}

pub struct PlanRequest<'a> {
    pub env: &'a mut dyn Environment,
    pub sampler: &'a mut dyn Sampler,
    pub rng: Rng,
    pub start: Configuration,
    pub goal: Configuration,
    pub params: PlannerParams,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PlannerStats {
    pub nodes_added: u64,
    pub samples_drawn: u64,
    pub nn_queries: u64,
    pub iterations: u64,
    /// Seconds; the only non-deterministic field.
    pub wall_time: f64,
    pub checks: CheckStats,
}

/// Best solution cost after a given number of samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostSample {
    pub samples: u64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub success: bool,
    pub path: Vec<Configuration>,
    /// Path length, `+inf` on failure.
    pub cost: f64,
    pub stats: PlannerStats,
    /// Every change of the best solution cost during the run.
    pub cost_trace: Vec<CostSample>,
}

/// Vertices and edges of whatever structure a planner grew, for rendering.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SearchGraph {
    pub nodes: Vec<Configuration>,
    pub edges: Vec<(usize, usize)>,
}

impl SearchGraph {
    pub(crate) fn extend_from_tree(&mut self, tree: &MotionTree) {
        let offset = self.nodes.len();
        self.nodes.extend(tree.nodes().iter().map(|n| n.config.clone()));
        self.edges.extend(tree.edges().map(|(p, c)| (p + offset, c + offset)));
    }
}

pub trait Planner: Send {
    fn name(&self) -> &str;

    fn solve(&mut self, req: &mut PlanRequest<'_>) -> Result<PlanResult>;

    /// Structure built by the last `solve`.
    fn search_graph(&self) -> SearchGraph;
}

/// Per-run bookkeeping common to all planners.
pub(crate) struct Run {
    pub ctx: SamplerContext,
    pub stats: PlannerStats,
    checks_before: CheckStats,
    clock: Instant,
}

impl Run {
    /// Validates parameters and start/goal (counted as two config checks).
    pub fn begin(req: &mut PlanRequest<'_>) -> Result<Self> {
        let clock = Instant::now();
        let checks_before = req.env.stats();
        let p = &req.params;
        if p.max_nodes < 1 {
            return Err(Error::InvalidInput("max_nodes must be at least 1".into()));
        }
        if !(p.eps > 0.0 && p.eps.is_finite()) {
            return Err(Error::InvalidInput(format!("eps must be positive, got {}", p.eps)));
        }
        if !(p.goal_radius >= 0.0 && p.goal_radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "goal_radius must be non-negative, got {}",
                p.goal_radius
            )));
        }
        let dim = req.env.dim();
        for (what, q) in [("start", &req.start), ("goal", &req.goal)] {
            if q.dim() != dim {
                return Err(Error::InvalidInput(format!(
                    "{what} has dimension {}, environment has {dim}",
                    q.dim()
                )));
            }
        }
        for (what, q) in [("start", &req.start), ("goal", &req.goal)] {
            if !req.env.is_free_config(q)? {
                return Err(Error::InvalidInput(format!("{what} {q:?} is in collision")));
            }
        }
        let ctx = SamplerContext::new(req.env.bounds().clone(), req.start.clone(), req.goal.clone())?;
        Ok(Self {
            ctx,
            stats: PlannerStats::default(),
            checks_before,
            clock,
        })
    }

    pub fn sample(&mut self, req: &mut PlanRequest<'_>) -> Result<Configuration> {
        self.stats.samples_drawn += 1;
        req.sampler.next(&self.ctx, &mut req.rng)
    }

    pub fn budget_left(&self, req: &PlanRequest<'_>) -> bool {
        (self.stats.samples_drawn as usize) < req.params.max_nodes
    }

    pub fn finish(
        mut self,
        req: &PlanRequest<'_>,
        path: Option<Vec<Configuration>>,
        cost_trace: Vec<CostSample>,
    ) -> PlanResult {
        let now = req.env.stats();
        let b = self.checks_before;
        self.stats.checks = CheckStats {
            config_checks: now.config_checks - b.config_checks,
            motion_checks: now.motion_checks - b.motion_checks,
            invalid_obstacle: now.invalid_obstacle - b.invalid_obstacle,
            invalid_connections: now.invalid_connections - b.invalid_connections,
        };
        self.stats.wall_time = self.clock.elapsed().as_secs_f64();
        match path {
            Some(path) => PlanResult {
                success: true,
                cost: path_length(&path),
                path,
                stats: self.stats,
                cost_trace,
            },
            None => PlanResult {
                success: false,
                path: Vec::new(),
                cost: f64::INFINITY,
                stats: self.stats,
                cost_trace,
            },
        }
    }
}

/// Start already inside the goal region with a free straight motion.
pub(crate) fn direct_goal(req: &mut PlanRequest<'_>) -> Result<Option<Vec<Configuration>>> {
    if dist(req.start.as_slice(), req.goal.as_slice()) <= req.params.goal_radius
        && req.env.is_free_motion(&req.start, &req.goal)?
    {
        return Ok(Some(vec![req.start.clone(), req.goal.clone()]));
    }
    Ok(None)
}

/// Whether a tree node may finish the plan: inside the goal region and
/// either on the goal or with a free motion to it.
pub(crate) fn reaches_goal(req: &mut PlanRequest<'_>, q: &Configuration) -> Result<bool> {
    if q == &req.goal {
        return Ok(true);
    }
    Ok(dist(q.as_slice(), req.goal.as_slice()) <= req.params.goal_radius && req.env.is_free_motion(q, &req.goal)?)
}

/// Tree path to `leaf` followed by the goal, unless the leaf is the goal.
pub(crate) fn path_to_goal(tree: &MotionTree, leaf: usize, goal: &Configuration) -> Result<Vec<Configuration>> {
    let mut path = tree.extract_path(leaf)?;
    if tree.config(leaf) != goal {
        path.push(goal.clone());
    }
    Ok(path)
}

#[cfg(test)]
pub(crate) mod test_support {
    use std::sync::Arc;

    use super::*;
    use crate::env::{OccupancyGrid, PointMassEnv};
    use crate::samplers::GoalBiasedSampler;

    pub fn q(v: &[f64]) -> Configuration {
        Configuration::new(v.to_vec()).unwrap()
    }

    pub fn solve_on(
        planner: &mut dyn Planner,
        grid: OccupancyGrid,
        start: &[f64],
        goal: &[f64],
        params: PlannerParams,
        seed: u64,
    ) -> Result<(PlanResult, PointMassEnv)> {
        let mut env = PointMassEnv::new(Arc::new(grid));
        let mut sampler = GoalBiasedSampler::new(0.05).unwrap();
        let mut req = PlanRequest {
            env: &mut env,
            sampler: &mut sampler,
            rng: Rng::seed_from_u64(seed),
            start: q(start),
            goal: q(goal),
            params,
        };
        let res = planner.solve(&mut req)?;
        Ok((res, env))
    }

    /// Re-checks every segment and the cost bookkeeping of a successful plan.
    pub fn assert_valid(res: &PlanResult, env: &mut dyn Environment, start: &[f64], goal: &[f64], goal_radius: f64) {
        assert!(res.success);
        assert_eq!(res.path[0], q(start));
        assert!(dist(res.path.last().unwrap().as_slice(), goal) <= goal_radius);
        for w in res.path.windows(2) {
            assert!(
                env.is_free_motion(&w[0], &w[1]).unwrap(),
                "segment {:?} -> {:?} collides",
                w[0],
                w[1]
            );
        }
        assert!((path_length(&res.path) - res.cost).abs() <= 1e-6);
    }
}
