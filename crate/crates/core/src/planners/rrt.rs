use super::{direct_goal, path_to_goal, reaches_goal, MotionTree, PlanRequest, PlanResult, Planner, Run, SearchGraph};
use crate::cspace::{steer_unchecked, Configuration};
use crate::error::Result;

/// Single-tree RRT. Stops at the first node that can reach the goal.
#[derive(Debug, Default)]
pub struct Rrt {
    tree: MotionTree,
}

impl Rrt {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tree(&self) -> &MotionTree {
        &self.tree
    }
}

/// One extension toward a sample: the nearest node and the steered
/// configuration, or `None` when the sample coincides with that node.
pub(crate) fn extension(
    tree: &MotionTree,
    run: &mut Run,
    q_rand: &Configuration,
    eps: f64,
) -> Result<Option<(usize, Configuration)>> {
    run.stats.nn_queries += 1;
    let near = tree.nearest(q_rand)?;
    let x_new = steer_unchecked(tree.config(near), q_rand, eps);
    if &x_new == tree.config(near) {
        return Ok(None);
    }
    Ok(Some((near, x_new)))
}

impl Planner for Rrt {
    fn name(&self) -> &str {
        "rrt"
    }

    fn solve(&mut self, req: &mut PlanRequest<'_>) -> Result<PlanResult> {
        let mut run = Run::begin(req)?;
        self.tree = MotionTree::with_root(req.start.clone());
        if let Some(path) = direct_goal(req)? {
            return Ok(run.finish(req, Some(path), Vec::new()));
        }
        while run.budget_left(req) {
            run.stats.iterations += 1;
            let q_rand = run.sample(req)?;
            let Some((near, x_new)) = extension(&self.tree, &mut run, &q_rand, req.params.eps)? else {
                req.sampler.report(false);
                continue;
            };
            if !req.env.is_free_motion(self.tree.config(near), &x_new)? {
                req.sampler.report(false);
                continue;
            }
            req.sampler.report(true);
            let id = self.tree.add(x_new, near)?;
            run.stats.nodes_added += 1;
            if reaches_goal(req, self.tree.config(id))? {
                let path = path_to_goal(&self.tree, id, &req.goal)?;
                if self.tree.config(id) != &req.goal {
                    // the goal joins the tree as the final node
                    self.tree.add(req.goal.clone(), id)?;
                }
                let trace = vec![super::CostSample {
                    samples: run.stats.samples_drawn,
                    cost: crate::cspace::path_length(&path),
                }];
                return Ok(run.finish(req, Some(path), trace));
            }
        }
        Ok(run.finish(req, None, Vec::new()))
    }

    fn search_graph(&self) -> SearchGraph {
        let mut g = SearchGraph::default();
        g.extend_from_tree(&self.tree);
        g
    }
}
