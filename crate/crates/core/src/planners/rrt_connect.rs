use std::mem;

use super::{MotionTree, PlanRequest, PlanResult, Planner, Run, SearchGraph};
use crate::cspace::{steer_unchecked, Configuration};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Extend {
    Reached(usize),
    Advanced(usize),
    Trapped,
}

/// Bidirectional RRT-Connect: a start tree and a goal tree swap roles every
/// iteration; the passive tree greedily connects toward each new node.
///
/// Connect steps add nodes without drawing samples, so `nodes_added` may
/// exceed `samples_drawn` for this planner.
#[derive(Debug, Default)]
pub struct RrtConnect {
    start_tree: MotionTree,
    goal_tree: MotionTree,
}

impl RrtConnect {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn trees(&self) -> (&MotionTree, &MotionTree) {
        (&self.start_tree, &self.goal_tree)
    }
}

fn extend(tree: &mut MotionTree, target: &Configuration, req: &mut PlanRequest<'_>, run: &mut Run) -> Result<Extend> {
    run.stats.nn_queries += 1;
    let near = tree.nearest(target)?;
    if tree.config(near) == target {
        return Ok(Extend::Reached(near));
    }
    let x_new = steer_unchecked(tree.config(near), target, req.params.eps);
    if !req.env.is_free_motion(tree.config(near), &x_new)? {
        return Ok(Extend::Trapped);
    }
    let reached = &x_new == target;
    let id = tree.add(x_new, near)?;
    run.stats.nodes_added += 1;
    Ok(if reached {
        Extend::Reached(id)
    } else {
        Extend::Advanced(id)
    })
}

fn connect(tree: &mut MotionTree, target: &Configuration, req: &mut PlanRequest<'_>, run: &mut Run) -> Result<Extend> {
    loop {
        match extend(tree, target, req, run)? {
            Extend::Advanced(_) => continue,
            other => return Ok(other),
        }
    }
}

impl Planner for RrtConnect {
    fn name(&self) -> &str {
        "rrt_connect"
    }

    fn solve(&mut self, req: &mut PlanRequest<'_>) -> Result<PlanResult> {
        let mut run = Run::begin(req)?;
        self.start_tree = MotionTree::with_root(req.start.clone());
        self.goal_tree = MotionTree::with_root(req.goal.clone());
        let mut active = MotionTree::new();
        let mut passive = MotionTree::new();
        mem::swap(&mut active, &mut self.start_tree);
        mem::swap(&mut passive, &mut self.goal_tree);
        let mut active_is_start = true;
        let mut path = None;

        while run.budget_left(req) {
            run.stats.iterations += 1;
            let q_rand = run.sample(req)?;
            let new_id = match extend(&mut active, &q_rand, req, &mut run)? {
                Extend::Trapped => {
                    req.sampler.report(false);
                    None
                }
                Extend::Reached(id) | Extend::Advanced(id) => {
                    req.sampler.report(true);
                    Some(id)
                }
            };
            if let Some(a_id) = new_id {
                let target = active.config(a_id).clone();
                if let Extend::Reached(b_id) = connect(&mut passive, &target, req, &mut run)? {
                    let mut joined = active.extract_path(a_id)?;
                    let mut tail = passive.extract_path(b_id)?;
                    tail.pop(); // same configuration as the join node
                    tail.reverse();
                    joined.extend(tail);
                    if !active_is_start {
                        joined.reverse();
                    }
                    path = Some(joined);
                    break;
                }
            }
            mem::swap(&mut active, &mut passive);
            active_is_start = !active_is_start;
        }

        if active_is_start {
            self.start_tree = active;
            self.goal_tree = passive;
        } else {
            self.start_tree = passive;
            self.goal_tree = active;
        }
        Ok(run.finish(req, path, Vec::new()))
    }

    fn search_graph(&self) -> SearchGraph {
        let mut g = SearchGraph::default();
        g.extend_from_tree(&self.start_tree);
        g.extend_from_tree(&self.goal_tree);
        g
    }
}
