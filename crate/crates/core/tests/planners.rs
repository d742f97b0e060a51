use std::sync::Arc;

use proptest::prelude::*;
use sbp_core::cspace::path_length;
use sbp_core::env::{Environment, OccupancyGrid, PlanarArmEnv, PointMassEnv};
use sbp_core::planners::nn::{linear_k_nearest, linear_nearest, linear_within, KdIndex};
use sbp_core::planners::{MotionTree, PlanRequest, PlanResult, PlannerParams, Prm, RrtStar};
use sbp_core::samplers::SamplerParams;
use sbp_core::{Configuration, Registry, Rng};

fn q(v: &[f64]) -> Configuration {
    Configuration::new(v.to_vec()).unwrap()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Two offset walls; the straight line is blocked.
fn slalom() -> Arc<OccupancyGrid> {
    Arc::new(
        OccupancyGrid::from_fn(100, 100, |x, y| {
            ((30..36).contains(&x) && y < 70) || ((65..71).contains(&x) && y >= 30)
        })
        .unwrap(),
    )
}

fn solve(
    planner: &str,
    env: &mut dyn Environment,
    start: &[f64],
    goal: &[f64],
    params: PlannerParams,
    seed: u64,
) -> PlanResult {
    let registry = Registry::with_builtins();
    let mut p = registry.create_planner(planner).unwrap();
    let mut s = registry
        .create_sampler("goal_biased", &SamplerParams::default())
        .unwrap();
    let mut req = PlanRequest {
        env,
        sampler: s.as_mut(),
        rng: Rng::seed_from_u64(seed),
        start: q(start),
        goal: q(goal),
        params,
    };
    p.solve(&mut req).unwrap()
}

fn check_valid(res: &PlanResult, env: &mut dyn Environment, start: &[f64], goal: &[f64], radius: f64) {
    assert!(res.success);
    assert_eq!(res.path[0], q(start));
    assert!(dist(res.path.last().unwrap().as_slice(), goal) <= radius);
    for w in res.path.windows(2) {
        assert!(env.is_free_motion(&w[0], &w[1]).unwrap());
    }
    let independent: f64 = res
        .path
        .windows(2)
        .map(|w| dist(w[0].as_slice(), w[1].as_slice()))
        .sum();
    assert!((independent - res.cost).abs() <= 1e-6);
}

#[test]
fn every_planner_finds_valid_paths_around_walls() {
    let params = PlannerParams {
        max_nodes: 4000,
        eps: 5.0,
        goal_radius: 5.0,
        ..Default::default()
    };
    for planner in ["prm", "rrt", "rrt_connect", "rrt_star"] {
        let mut successes = 0;
        for seed in 0..5 {
            let mut env = PointMassEnv::new(slalom());
            let res = solve(planner, &mut env, &[10.0, 10.0], &[90.0, 90.0], params, seed);
            if res.success {
                successes += 1;
                check_valid(&res, &mut env, &[10.0, 10.0], &[90.0, 90.0], 5.0);
                // both walls force a detour past the straight-line length
                assert!(res.cost > 80.0 * 2f64.sqrt());
            } else {
                assert_eq!(res.cost, f64::INFINITY);
                assert!(res.path.is_empty());
            }
            assert!(res.stats.samples_drawn <= 4000);
            if planner != "rrt_connect" {
                assert!(res.stats.nodes_added <= res.stats.samples_drawn);
            }
        }
        assert!(successes >= 4, "{planner}: {successes}/5");
    }
}

#[test]
fn arm_paths_are_valid_in_joint_space() {
    // a post next to the arm that the straight joint motion would sweep through
    let grid =
        Arc::new(OccupancyGrid::from_fn(120, 120, |x, y| (75..80).contains(&x) && (40..58).contains(&y)).unwrap());
    let start = [0.0, 0.0, 0.0];
    let goal = [-1.2, 0.4, 0.4];
    let params = PlannerParams {
        max_nodes: 3000,
        eps: 0.4,
        goal_radius: 0.2,
        ..Default::default()
    };
    for planner in ["prm", "rrt", "rrt_connect", "rrt_star"] {
        let mut env = PlanarArmEnv::new(grid.clone(), (60.0, 60.0), vec![12.0, 12.0, 10.0]).unwrap();
        assert!(env.is_free_config(&q(&start)).unwrap());
        assert!(env.is_free_config(&q(&goal)).unwrap());
        let res = solve(planner, &mut env, &start, &goal, params, 11);
        check_valid(&res, &mut env, &start, &goal, 0.2);
    }
}

#[test]
fn identical_requests_give_identical_results() {
    let params = PlannerParams {
        max_nodes: 1500,
        ..Default::default()
    };
    for planner in ["prm", "rrt", "rrt_connect", "rrt_star"] {
        let run = || {
            let mut env = PointMassEnv::new(slalom());
            let mut r = solve(planner, &mut env, &[10.0, 10.0], &[90.0, 90.0], params, 77);
            r.stats.wall_time = 0.0;
            r
        };
        assert_eq!(run(), run(), "{planner}");
    }
}

/// Bellman-Ford over an explicit edge list.
fn bellman_ford(n: usize, edges: &[(usize, usize, f64)], src: usize) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; n];
    d[src] = 0.0;
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in edges {
            for (a, b) in [(u, v), (v, u)] {
                if d[a] + w < d[b] {
                    d[b] = d[a] + w;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d
}

#[test]
fn prm_cost_matches_bellman_ford_oracle() {
    let params = PlannerParams {
        max_nodes: 300,
        prm_k: 6,
        ..Default::default()
    };
    let registry = Registry::with_builtins();
    for seed in 0..6 {
        let mut env = PointMassEnv::new(slalom());
        let mut prm = Prm::new();
        let mut s = registry.create_sampler("uniform", &SamplerParams::default()).unwrap();
        let mut req = PlanRequest {
            env: &mut env,
            sampler: s.as_mut(),
            rng: Rng::seed_from_u64(seed),
            start: q(&[10.0, 10.0]),
            goal: q(&[90.0, 90.0]),
            params,
        };
        use sbp_core::planners::Planner;
        let res = prm.solve(&mut req).unwrap();
        let rm = prm.roadmap();
        let n = rm.len();
        let edges: Vec<(usize, usize, f64)> = rm
            .edges()
            .into_iter()
            .map(|(u, v)| (u, v, dist(rm.vertices()[u].as_slice(), rm.vertices()[v].as_slice())))
            .collect();
        // start and goal are the last two vertices
        let d = bellman_ford(n, &edges, n - 2);
        if res.success {
            assert!(
                (res.cost - d[n - 1]).abs() <= 1e-9,
                "seed {seed}: {} vs {}",
                res.cost,
                d[n - 1]
            );
        } else {
            assert_eq!(d[n - 1], f64::INFINITY, "seed {seed}");
        }
    }
}

#[test]
fn rrt_star_trace_is_monotone_and_tree_coherent() {
    let params = PlannerParams {
        max_nodes: 1500,
        ..Default::default()
    };
    for seed in 0..4 {
        let mut env = PointMassEnv::new(slalom());
        let mut p = RrtStar::with_audit();
        let registry = Registry::with_builtins();
        let mut s = registry.create_sampler("informed", &SamplerParams::default()).unwrap();
        let mut req = PlanRequest {
            env: &mut env,
            sampler: s.as_mut(),
            rng: Rng::seed_from_u64(seed),
            start: q(&[10.0, 10.0]),
            goal: q(&[90.0, 90.0]),
            params,
        };
        use sbp_core::planners::Planner;
        let res = p.solve(&mut req).unwrap();
        assert!(p.max_audit_error() <= 1e-6);
        assert!(res
            .cost_trace
            .windows(2)
            .all(|w| w[1].cost <= w[0].cost && w[1].samples >= w[0].samples));
        if res.success {
            assert_eq!(res.cost_trace.last().unwrap().cost, res.cost);
            check_valid(&res, &mut env, &[10.0, 10.0], &[90.0, 90.0], 10.0);
        }
    }
}

fn random_tree(seed: u64, n: usize, d: usize) -> MotionTree {
    let mut rng = Rng::seed_from_u64(seed);
    let mut tree = MotionTree::with_root(q(&vec![0.0; d]));
    for i in 1..n {
        let c: Vec<f64> = (0..d).map(|_| rng.range(-50.0, 50.0)).collect();
        let parent = (rng.next_u64() % i as u64) as usize;
        tree.add(Configuration::new(c).unwrap(), parent).unwrap();
    }
    tree
}

#[test]
fn extract_path_equals_reversed_parent_walk() {
    for seed in 0..20 {
        let tree = random_tree(seed, 200, 3);
        let mut rng = Rng::seed_from_u64(seed + 1000);
        let leaf = (rng.next_u64() % 200) as usize;
        let mut walk = Vec::new();
        let mut cur = Some(leaf);
        while let Some(id) = cur {
            walk.push(tree.nodes()[id].config.clone());
            cur = tree.nodes()[id].parent;
        }
        walk.reverse();
        let path = tree.extract_path(leaf).unwrap();
        assert_eq!(path, walk);
        assert!((path_length(&path) - tree.node(leaf).cost).abs() <= 1e-9);
    }
}

#[test]
fn tree_queries_match_linear_scan() {
    for seed in 0..30 {
        let tree = random_tree(seed, 500, 2);
        let pts: Vec<Vec<f64>> = tree.nodes().iter().map(|n| n.config.as_slice().to_vec()).collect();
        let mut rng = Rng::seed_from_u64(seed ^ 0xabc);
        for _ in 0..100 {
            let c = q(&[rng.range(-60.0, 60.0), rng.range(-60.0, 60.0)]);
            assert_eq!(Some(tree.nearest(&c).unwrap()), linear_nearest(&pts, c.as_slice()));
            let r = rng.range(0.0, 20.0);
            assert_eq!(tree.near(&c, r).unwrap(), linear_within(&pts, c.as_slice(), r));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kd_index_matches_linear_scan_with_ties(
        pts in prop::collection::vec(prop::collection::vec(-5i32..5, 3), 1..150),
        queries in prop::collection::vec(prop::collection::vec(-6i32..6, 3), 1..20),
        radius in 0.0..4.0f64,
        k in 1usize..12,
    ) {
        // integer lattices produce many exact distance ties
        let pts: Vec<Vec<f64>> = pts.into_iter().map(|p| p.into_iter().map(f64::from).collect()).collect();
        let mut idx = KdIndex::new();
        for p in &pts {
            idx.insert(p);
        }
        for qv in queries {
            let qv: Vec<f64> = qv.into_iter().map(f64::from).collect();
            prop_assert_eq!(idx.nearest(&qv), linear_nearest(&pts, &qv));
            prop_assert_eq!(idx.within(&qv, radius), linear_within(&pts, &qv, radius));
            prop_assert_eq!(idx.k_nearest(&qv, k), linear_k_nearest(&pts, &qv, k));
        }
    }
}
