use super::{PlanRequest, PlanResult, Planner, Roadmap, Run, SearchGraph};
use crate::error::{Error, Result};

/// Probabilistic roadmap, single query.
///
/// 1. Draw `max_nodes` samples, keeping the collision-free ones.
/// 2. Link every vertex to its `prm_k` nearest vertices where the motion is free.
/// 3. Insert start then goal with the same wiring and run uniform-cost search.
#[derive(Debug, Default)]
pub struct Prm {
    roadmap: Roadmap,
}

impl Prm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn roadmap(&self) -> &Roadmap {
        &self.roadmap
    }
}

impl Planner for Prm {
    fn name(&self) -> &str {
        "prm"
    }

    fn solve(&mut self, req: &mut PlanRequest<'_>) -> Result<PlanResult> {
        let mut run = Run::begin(req)?;
        let k = req.params.prm_k;
        if k < 1 {
            return Err(Error::InvalidInput("prm_k must be at least 1".into()));
        }
        self.roadmap = Roadmap::new();

        while run.budget_left(req) {
            run.stats.iterations += 1;
            let q = run.sample(req)?;
            let free = req.env.is_free_config(&q)?;
            req.sampler.report(free);
            if free {
                self.roadmap.add_vertex(q);
                run.stats.nodes_added += 1;
            }
        }
        for v in 0..self.roadmap.len() {
            self.roadmap.connect_k_nearest(v, k, req.env, &mut run.stats)?;
        }
        let start = self.roadmap.add_vertex(req.start.clone());
        self.roadmap.connect_k_nearest(start, k, req.env, &mut run.stats)?;
        let goal = self.roadmap.add_vertex(req.goal.clone());
        self.roadmap.connect_k_nearest(goal, k, req.env, &mut run.stats)?;

        let path = self.roadmap.shortest_path(start, goal).map(|(ids, _)| {
            ids.into_iter()
                .map(|v| self.roadmap.vertices()[v].clone())
                .collect::<Vec<_>>()
        });
        Ok(run.finish(req, path, Vec::new()))
    }

    fn search_graph(&self) -> SearchGraph {
        SearchGraph {
            nodes: self.roadmap.vertices().to_vec(),
            edges: self.roadmap.edges(),
        }
    }
}
