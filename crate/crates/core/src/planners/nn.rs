//! Nearest-neighbour queries over an append-only point set.
//!
//! [`KdIndex`] is an incremental kd-tree. The `linear_*` functions are the
//! reference scans it must agree with exactly, including ties, which are
//! always broken by the smaller id.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::cspace::dist;

const NONE: usize = usize::MAX;

/// Pruning slack absorbing the last-ulp gap between a split-plane offset and
/// the rounded Euclidean distance.
const PRUNE_SLACK: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, Copy)]
struct KdNode {
    axis: usize,
    left: usize,
    right: usize,
}

#[derive(Debug, Clone, Default)]
pub struct KdIndex {
    points: Vec<Box<[f64]>>,
    nodes: Vec<KdNode>,
}

impl KdIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, id: usize) -> &[f64] {
        &self.points[id]
    }

    /// Inserts a point; ids are assigned in insertion order.
    pub fn insert(&mut self, p: &[f64]) -> usize {
        let id = self.points.len();
        debug_assert!(self.points.first().is_none_or(|q| q.len() == p.len()));
        let mut axis = 0;
        if id > 0 {
            let mut cur = 0;
            loop {
                let node = self.nodes[cur];
                let go_left = p[node.axis] < self.points[cur][node.axis];
                let next = if go_left { node.left } else { node.right };
                if next == NONE {
                    if go_left {
                        self.nodes[cur].left = id;
                    } else {
                        self.nodes[cur].right = id;
                    }
                    axis = (node.axis + 1) % p.len();
                    break;
                }
                cur = next;
            }
        }
        self.points.push(p.into());
        self.nodes.push(KdNode {
            axis,
            left: NONE,
            right: NONE,
        });
        id
    }

    /// Visits subtrees whose lower bound passes `keep`, nearest side first.
    fn search(&self, q: &[f64], mut visit: impl FnMut(usize, f64), keep: impl Fn(f64) -> bool) {
        if self.is_empty() {
            return;
        }
        let mut stack = vec![(0usize, 0.0f64)];
        while let Some((id, bound)) = stack.pop() {
            if !keep(bound * PRUNE_SLACK) {
                continue;
            }
            let p = &self.points[id];
            visit(id, dist(p, q));
            let node = self.nodes[id];
            let diff = q[node.axis] - p[node.axis];
            let (near, far) = if diff < 0.0 {
                (node.left, node.right)
            } else {
                (node.right, node.left)
            };
            if far != NONE {
                stack.push((far, bound.max(diff.abs())));
            }
            if near != NONE {
                stack.push((near, bound));
            }
        }
    }

    pub fn nearest(&self, q: &[f64]) -> Option<usize> {
        let mut best = (f64::INFINITY, NONE);
        let best_cell = std::cell::Cell::new(f64::INFINITY);
        self.search(
            q,
            |id, d| {
                if d < best.0 || (d == best.0 && id < best.1) {
                    best = (d, id);
                    best_cell.set(d);
                }
            },
            |bound| bound <= best_cell.get(),
        );
        (best.1 != NONE).then_some(best.1)
    }

    /// All ids within `radius` (inclusive), ascending.
    pub fn within(&self, q: &[f64], radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.search(
            q,
            |id, d| {
                if d <= radius {
                    out.push(id);
                }
            },
            |bound| bound <= radius,
        );
        out.sort_unstable();
        out
    }

    /// The `k` nearest ids ordered by `(distance, id)`.
    pub fn k_nearest(&self, q: &[f64], k: usize) -> Vec<usize> {
        if k == 0 {
            return Vec::new();
        }
        let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
        let worst = std::cell::Cell::new(f64::INFINITY);
        self.search(
            q,
            |id, d| {
                heap.push(Candidate { d, id });
                if heap.len() > k {
                    heap.pop();
                }
                if heap.len() == k {
                    worst.set(heap.peek().map_or(f64::INFINITY, |c| c.d));
                }
            },
            |bound| bound <= worst.get(),
        );
        let mut out = heap.into_vec();
        out.sort();
        out.into_iter().map(|c| c.id).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    d: f64,
    id: usize,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d.total_cmp(&other.d).then(self.id.cmp(&other.id))
    }
}

pub fn linear_nearest<P: AsRef<[f64]>>(points: &[P], q: &[f64]) -> Option<usize> {
    points
        .iter()
        .enumerate()
        .map(|(id, p)| (dist(p.as_ref(), q), id))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, id)| id)
}

pub fn linear_within<P: AsRef<[f64]>>(points: &[P], q: &[f64], radius: f64) -> Vec<usize> {
    points
        .iter()
        .enumerate()
        .filter(|(_, p)| dist(p.as_ref(), q) <= radius)
        .map(|(id, _)| id)
        .collect()
}

pub fn linear_k_nearest<P: AsRef<[f64]>>(points: &[P], q: &[f64], k: usize) -> Vec<usize> {
    let mut all: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .map(|(id, p)| (dist(p.as_ref(), q), id))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    all.into_iter().take(k).map(|(_, id)| id).collect()
}
