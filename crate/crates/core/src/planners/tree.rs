use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use super::nn::KdIndex;
use super::PlannerStats;
use crate::cspace::{dist, Configuration};
use crate::env::Environment;
use crate::error::{contract, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub config: Configuration,
    pub parent: Option<usize>,
    /// Cost-to-come along tree edges.
    pub cost: f64,
}

/// Append-only tree of configurations rooted at node 0.
///
/// Nodes are appended after their parent. RRT* may later re-parent a node
/// onto a younger one, so `parent < id` only holds until the first rewire.
#[derive(Debug, Clone, Default)]
pub struct MotionTree {
    nodes: Vec<Node>,
    children: Vec<Vec<usize>>,
    index: KdIndex,
}

impl MotionTree {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_root(root: Configuration) -> Self {
        let mut t = Self::new();
        t.push(root, None, 0.0);
        t
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn config(&self, id: usize) -> &Configuration {
        &self.nodes[id].config
    }

    fn push(&mut self, config: Configuration, parent: Option<usize>, cost: f64) -> usize {
        let id = self.index.insert(config.as_slice());
        debug_assert_eq!(id, self.nodes.len());
        self.nodes.push(Node {
            id,
            config,
            parent,
            cost,
        });
        self.children.push(Vec::new());
        if let Some(p) = parent {
            self.children[p].push(id);
        }
        id
    }

    /// Appends `config` as a child of `parent`; the root must exist.
    pub fn add(&mut self, config: Configuration, parent: usize) -> Result<usize> {
        let p = self
            .nodes
            .get(parent)
            .ok_or_else(|| contract(format!("unknown parent node {parent}")))?;
        if p.config.dim() != config.dim() {
            return Err(contract("node dimension differs from tree dimension"));
        }
        let cost = p.cost + dist(p.config.as_slice(), config.as_slice());
        Ok(self.push(config, Some(parent), cost))
    }

    /// Id of the node closest to `q`, smallest id on ties.
    pub fn nearest(&self, q: &Configuration) -> Result<usize> {
        self.check_query(q)?;
        self.index
            .nearest(q.as_slice())
            .ok_or_else(|| contract("nearest query on an empty tree"))
    }

    /// Ids within `radius` of `q`, ascending.
    pub fn near(&self, q: &Configuration, radius: f64) -> Result<Vec<usize>> {
        if radius.is_nan() || radius < 0.0 {
            return Err(contract(format!("near radius must be non-negative, got {radius}")));
        }
        if self.is_empty() {
            return Ok(Vec::new());
        }
        self.check_query(q)?;
        Ok(self.index.within(q.as_slice(), radius))
    }

    fn check_query(&self, q: &Configuration) -> Result<()> {
        match self.nodes.first() {
            Some(root) if root.config.dim() != q.dim() => Err(crate::error::Error::DimensionMismatch {
                expected: root.config.dim(),
                got: q.dim(),
            }),
            _ => Ok(()),
        }
    }

    /// Root-to-leaf configurations.
    pub fn extract_path(&self, leaf: usize) -> Result<Vec<Configuration>> {
        if leaf >= self.nodes.len() {
            return Err(contract(format!("unknown node id {leaf}")));
        }
        let mut path = Vec::new();
        let mut cur = Some(leaf);
        while let Some(id) = cur {
            path.push(self.nodes[id].config.clone());
            cur = self.nodes[id].parent;
            if path.len() > self.nodes.len() {
                return Err(contract("cycle in parent links"));
            }
        }
        path.reverse();
        Ok(path)
    }

    /// Moves `child` under `new_parent` and refreshes the cost of its whole
    /// subtree.
    pub(crate) fn reparent(&mut self, child: usize, new_parent: usize) {
        debug_assert!(!self.is_ancestor(child, new_parent));
        if let Some(old) = self.nodes[child].parent {
            self.children[old].retain(|&c| c != child);
        }
        self.nodes[child].parent = Some(new_parent);
        self.children[new_parent].push(child);
        let mut stack = vec![child];
        while let Some(id) = stack.pop() {
            let p = self.nodes[id].parent.expect("non-root");
            self.nodes[id].cost =
                self.nodes[p].cost + dist(self.nodes[p].config.as_slice(), self.nodes[id].config.as_slice());
            stack.extend_from_slice(&self.children[id]);
        }
    }

    fn is_ancestor(&self, ancestor: usize, mut node: usize) -> bool {
        loop {
            if node == ancestor {
                return true;
            }
            match self.nodes[node].parent {
                Some(p) => node = p,
                None => return false,
            }
        }
    }

    /// Largest gap between stored cost and the recomputed root-path length.
    pub fn max_cost_error(&self) -> f64 {
        self.nodes
            .iter()
            .map(|n| {
                let path = self.extract_path(n.id).expect("valid id");
                (crate::cspace::path_length(&path) - n.cost).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Parent -> child edges in child id order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.iter().filter_map(|n| n.parent.map(|p| (p, n.id)))
    }
}

/// Undirected roadmap with edge weights equal to configuration distance.
#[derive(Debug, Clone, Default)]
pub struct Roadmap {
    vertices: Vec<Configuration>,
    adjacency: Vec<Vec<(usize, f64)>>,
    index: KdIndex,
    attempted: HashSet<(usize, usize)>,
}

impl Roadmap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Configuration] {
        &self.vertices
    }

    pub fn neighbours(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn add_vertex(&mut self, q: Configuration) -> usize {
        let id = self.index.insert(q.as_slice());
        self.vertices.push(q);
        self.adjacency.push(Vec::new());
        id
    }

    /// Tries edges from `v` to its `k` nearest other vertices, keeping the
    /// collision-free ones. Each unordered pair is checked at most once.
    pub fn connect_k_nearest(
        &mut self,
        v: usize,
        k: usize,
        env: &mut dyn Environment,
        stats: &mut PlannerStats,
    ) -> Result<()> {
        stats.nn_queries += 1;
        let q = self.vertices[v].as_slice().to_vec();
        let mut nbrs = self.index.k_nearest(&q, k + 1);
        nbrs.retain(|&u| u != v);
        nbrs.truncate(k);
        for u in nbrs {
            let key = (u.min(v), u.max(v));
            if !self.attempted.insert(key) {
                continue;
            }
            if env.is_free_motion(&self.vertices[v], &self.vertices[u])? {
                let w = dist(&q, self.vertices[u].as_slice());
                self.adjacency[v].push((u, w));
                self.adjacency[u].push((v, w));
            }
        }
        Ok(())
    }

    /// Undirected edges `(i, j)` with `i < j`, ordered by `i` then insertion.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, adj)| adj.iter().filter(move |(j, _)| i < *j).map(move |(j, _)| (i, *j)))
            .collect()
    }

    /// Uniform-cost search; returns the vertex sequence and its cost.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<(Vec<usize>, f64)> {
        let n = self.vertices.len();
        let mut best = vec![f64::INFINITY; n];
        let mut prev = vec![usize::MAX; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        best[from] = 0.0;
        heap.push(Reverse((Key(0.0), from)));
        while let Some(Reverse((Key(c), v))) = heap.pop() {
            if done[v] {
                continue;
            }
            done[v] = true;
            if v == to {
                let mut path = vec![to];
                while *path.last().unwrap() != from {
                    path.push(prev[*path.last().unwrap()]);
                }
                path.reverse();
                return Some((path, c));
            }
            for &(u, w) in &self.adjacency[v] {
                let nc = c + w;
                if nc < best[u] {
                    best[u] = nc;
                    prev[u] = v;
                    heap.push(Reverse((Key(nc), u)));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
