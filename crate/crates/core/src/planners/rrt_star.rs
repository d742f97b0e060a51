use super::rrt::extension;
use super::{
    direct_goal, path_to_goal, reaches_goal, CostSample, MotionTree, PlanRequest, PlanResult, Planner, Run, SearchGraph,
};
use crate::cspace::dist;
use crate::error::Result;

/// RRT* with choose-parent and rewiring.
///
/// The vertex sequence is exactly the one plain RRT would grow from the same
/// sample stream: a node is accepted iff the motion from its nearest node is
/// free, and only the parent choice differs. Hence every node's cost is at
/// most its RRT cost. Runs until the sample budget is spent and returns the
/// cheapest goal connection found.
#[derive(Debug, Default)]
pub struct RrtStar {
    tree: MotionTree,
    audit: bool,
    max_audit_error: f64,
}

impl RrtStar {
    pub fn new() -> Self {
        Self::default()
    }

    /// Re-derive every node cost after each iteration (slow; for tests).
    pub fn with_audit() -> Self {
        Self {
            audit: true,
            ..Self::default()
        }
    }

    pub fn tree(&self) -> &MotionTree {
        &self.tree
    }

    /// Worst cost-coherence error seen by the audit.
    pub fn max_audit_error(&self) -> f64 {
        self.max_audit_error
    }

    /// `min(gamma (ln n / n)^(1/d), 2 eps)` with
    /// `gamma = multiplier * 2 eps (1 + 1/d)^(1/d)`.
    pub fn neighbourhood_radius(n: usize, d: usize, eps: f64, multiplier: f64) -> f64 {
        let d = d as f64;
        let gamma = multiplier * 2.0 * eps * (1.0 + 1.0 / d).powf(1.0 / d);
        let n = n.max(1) as f64;
        (gamma * (n.ln() / n).powf(1.0 / d)).min(2.0 * eps)
    }
}

impl Planner for RrtStar {
    fn name(&self) -> &str {
        "rrt_star"
    }

    fn solve(&mut self, req: &mut PlanRequest<'_>) -> Result<PlanResult> {
        let mut run = Run::begin(req)?;
        self.tree = MotionTree::with_root(req.start.clone());
        self.max_audit_error = 0.0;
        if let Some(path) = direct_goal(req)? {
            // the straight line is optimal; nothing left to improve
            return Ok(run.finish(req, Some(path), Vec::new()));
        }
        let eps = req.params.eps;
        let dim = req.start.dim();
        let mut goal_nodes: Vec<usize> = Vec::new();
        let mut best: Option<(usize, f64)> = None;
        let mut trace = Vec::new();

        while run.budget_left(req) {
            run.stats.iterations += 1;
            let q_rand = run.sample(req)?;
            let Some((nearest, x_new)) = extension(&self.tree, &mut run, &q_rand, eps)? else {
                req.sampler.report(false);
                continue;
            };
            if !req.env.is_free_motion(self.tree.config(nearest), &x_new)? {
                req.sampler.report(false);
                continue;
            }
            req.sampler.report(true);

            let radius = Self::neighbourhood_radius(self.tree.len(), dim, eps, req.params.rewire_multiplier);
            run.stats.nn_queries += 1;
            let neighbours = self.tree.near(&x_new, radius)?;

            let mut parent = nearest;
            let mut parent_cost =
                self.tree.node(nearest).cost + dist(self.tree.config(nearest).as_slice(), x_new.as_slice());
            for &nb in neighbours.iter().filter(|&&nb| nb != nearest) {
                let c = self.tree.node(nb).cost + dist(self.tree.config(nb).as_slice(), x_new.as_slice());
                if c < parent_cost && req.env.is_free_motion(self.tree.config(nb), &x_new)? {
                    parent = nb;
                    parent_cost = c;
                }
            }
            let id = self.tree.add(x_new, parent)?;
            run.stats.nodes_added += 1;

            for &nb in neighbours.iter().filter(|&&nb| nb != parent) {
                let via =
                    self.tree.node(id).cost + dist(self.tree.config(id).as_slice(), self.tree.config(nb).as_slice());
                if via < self.tree.node(nb).cost
                    && req.env.is_free_motion(self.tree.config(id), self.tree.config(nb))?
                {
                    self.tree.reparent(nb, id);
                }
            }

            if reaches_goal(req, self.tree.config(id))? {
                goal_nodes.push(id);
            }
            let current = goal_nodes
                .iter()
                .map(|&g| {
                    (
                        g,
                        self.tree.node(g).cost + dist(self.tree.config(g).as_slice(), req.goal.as_slice()),
                    )
                })
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            if let Some((g, c)) = current {
                if best.is_none_or(|(_, prev)| c != prev) {
                    trace.push(CostSample {
                        samples: run.stats.samples_drawn,
                        cost: c,
                    });
                }
                best = Some((g, c));
                run.ctx.best_cost = c;
            }
            if self.audit {
                self.max_audit_error = self.max_audit_error.max(self.tree.max_cost_error());
            }
        }

        let path = best.map(|(g, _)| path_to_goal(&self.tree, g, &req.goal)).transpose()?;
        Ok(run.finish(req, path, trace))
    }

    fn search_graph(&self) -> SearchGraph {
        let mut g = SearchGraph::default();
        g.extend_from_tree(&self.tree);
        g
    }
}
