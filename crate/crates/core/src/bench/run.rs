use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{BenchmarkSpec, EnvSpec, PlanConfig, Scenario};
use super::svg::render_svg;
use crate::cspace::Configuration;
use crate::env::{Environment, OccupancyGrid, PlanarArmEnv, PointMassEnv};
use crate::error::{Error, Result};
use crate::planners::{PlanRequest, PlanResult, SearchGraph};
use crate::registry::Registry;
use crate::rng::Rng;

/// One row of benchmark output. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config_id: String,
    pub planner: String,
    pub sampler: String,
    pub seed: u64,
    pub success: bool,
    /// Path length; absent on failure.
    pub cost: Option<f64>,
    pub wall_time: f64,
    pub nodes_added: u64,
    pub samples_drawn: u64,
    pub config_checks: u64,
    pub motion_checks: u64,
    pub invalid_obstacle: u64,
    pub invalid_connections: u64,
}

impl RunRecord {
    fn new(cfg: &PlanConfig, res: &PlanResult) -> Self {
        let s = &res.stats;
        Self {
            config_id: cfg.scenario.id.clone(),
            planner: cfg.planner.clone(),
            sampler: cfg.scenario.sampler.clone(),
            seed: cfg.seed,
            success: res.success,
            cost: res.success.then_some(res.cost),
            wall_time: s.wall_time,
            nodes_added: s.nodes_added,
            samples_drawn: s.samples_drawn,
            config_checks: s.checks.config_checks,
            motion_checks: s.checks.motion_checks,
            invalid_obstacle: s.checks.invalid_obstacle,
            invalid_connections: s.checks.invalid_connections,
        }
    }
}

/// JSON output of a single plan: the record plus the path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanOutput {
    #[serde(flatten)]
    pub record: RunRecord,
    pub path: Vec<Configuration>,
}

impl PlanOutput {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.into()))?;
        s.push('\n');
        Ok(s)
    }
}

/// A finished run with everything needed to render it.
pub struct Execution {
    pub record: RunRecord,
    pub result: PlanResult,
    pub graph: SearchGraph,
    pub env: Box<dyn Environment>,
    pub start: Configuration,
    pub goal: Configuration,
}

impl std::fmt::Debug for Execution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Execution")
            .field("record", &self.record)
            .finish_non_exhaustive()
    }
}

impl Execution {
    pub fn output(&self) -> PlanOutput {
        PlanOutput {
            record: self.record.clone(),
            path: self.result.path.clone(),
        }
    }

    pub fn render(&self, out: &mut dyn Write) -> Result<()> {
        render_svg(
            self.env.as_ref(),
            &self.graph,
            &self.result.path,
            &self.start,
            &self.goal,
            out,
        )
    }
}

/// Reads a Netpbm map; any failure is an input error.
pub fn load_map(path: &Path) -> Result<Arc<OccupancyGrid>> {
    let bytes =
        std::fs::read(path).map_err(|e| Error::InvalidInput(format!("cannot read map {}: {e}", path.display())))?;
    Ok(Arc::new(OccupancyGrid::from_netpbm(&bytes)?))
}

pub fn build_env(spec: &EnvSpec, grid: Arc<OccupancyGrid>) -> Result<Box<dyn Environment>> {
    Ok(match spec {
        EnvSpec::Point => Box::new(PointMassEnv::new(grid)),
        EnvSpec::Arm { base, link_lengths } => {
            let env = PlanarArmEnv::new(grid, *base, link_lengths.clone())
                .map_err(|e| Error::InvalidInput(format!("arm: {e}")))?;
            Box::new(env)
        }
    })
}

/// Runs one configuration against an already loaded map.
pub fn execute(cfg: &PlanConfig, registry: &Registry, grid: Arc<OccupancyGrid>) -> Result<Execution> {
    let sc = &cfg.scenario;
    let mut env = build_env(&sc.env, grid)?;
    let mut sampler = registry.create_sampler(&sc.sampler, &sc.sampler_params)?;
    let mut planner = registry.create_planner(&cfg.planner)?;
    let mut req = PlanRequest {
        env: env.as_mut(),
        sampler: sampler.as_mut(),
        rng: Rng::seed_from_u64(cfg.seed),
        start: sc.start.clone(),
        goal: sc.goal.clone(),
        params: sc.params,
    };
    let result = planner.solve(&mut req)?;
    Ok(Execution {
        record: RunRecord::new(cfg, &result),
        graph: planner.search_graph(),
        result,
        env,
        start: sc.start.clone(),
        goal: sc.goal.clone(),
    })
}

/// Loads the map, plans, and renders only when `svg` is given.
pub fn run_single(cfg: &PlanConfig, registry: &Registry, svg: Option<&mut dyn Write>) -> Result<PlanOutput> {
    let grid = load_map(&cfg.scenario.map_path)?;
    let exec = execute(cfg, registry, grid)?;
    if let Some(out) = svg {
        exec.render(out)?;
    }
    Ok(exec.output())
}

/// Aggregate over all seeds of one (template, planner) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config_id: String,
    pub planner: String,
    pub sampler: String,
    pub runs: usize,
    pub successes: usize,
    pub success_rate: f64,
    /// Over successful runs only.
    pub cost_median: Option<f64>,
    pub cost_mean: Option<f64>,
    pub samples_median: f64,
    pub config_checks_total: u64,
    pub motion_checks_total: u64,
    pub invalid_obstacle_total: u64,
    pub invalid_connections_total: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOutput {
    /// Canonical order: template, planner, ascending seed.
    pub records: Vec<RunRecord>,
    /// One per (template, planner), same order.
    pub summaries: Vec<Summary>,
}

/// Median of a non-empty slice; even lengths average the middle pair.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

pub fn summarize(records: &[RunRecord]) -> Summary {
    let first = &records[0];
    let costs: Vec<f64> = records.iter().filter_map(|r| r.cost).collect();
    let samples: Vec<f64> = records.iter().map(|r| r.samples_drawn as f64).collect();
    let sum = |f: fn(&RunRecord) -> u64| records.iter().map(f).sum::<u64>();
    Summary {
        config_id: first.config_id.clone(),
        planner: first.planner.clone(),
        sampler: first.sampler.clone(),
        runs: records.len(),
        successes: costs.len(),
        success_rate: costs.len() as f64 / records.len() as f64,
        cost_median: median(&costs),
        cost_mean: (!costs.is_empty()).then(|| costs.iter().sum::<f64>() / costs.len() as f64),
        samples_median: median(&samples).unwrap_or(0.0),
        config_checks_total: sum(|r| r.config_checks),
        motion_checks_total: sum(|r| r.motion_checks),
        invalid_obstacle_total: sum(|r| r.invalid_obstacle),
        invalid_connections_total: sum(|r| r.invalid_connections),
    }
}

/// Loads every map and checks start/goal of every template before any run.
fn prepare(templates: &[Scenario]) -> Result<Vec<Arc<OccupancyGrid>>> {
    let mut grids = Vec::with_capacity(templates.len());
    for t in templates {
        let grid = load_map(&t.map_path).map_err(|e| Error::InvalidInput(format!("template '{}': {e}", t.id)))?;
        let mut env = build_env(&t.env, grid.clone())?;
        for (what, q) in [("start", &t.start), ("goal", &t.goal)] {
            if !env.is_free_config(q)? {
                return Err(Error::InvalidInput(format!(
                    "template '{}': {what} {q:?} is in collision",
                    t.id
                )));
            }
        }
        grids.push(grid);
    }
    Ok(grids)
}

/// Runs the full cross product on `jobs` worker threads. Never renders.
pub fn run_benchmark(spec: &BenchmarkSpec, registry: &Registry, jobs: usize) -> Result<BenchmarkOutput> {
    if jobs < 1 {
        return Err(Error::InvalidInput("jobs must be at least 1".into()));
    }
    let grids = prepare(&spec.templates)?;
    let per_template = spec.planners.len() * spec.seeds.len();
    let runs: Vec<(usize, PlanConfig)> = spec
        .runs()
        .into_iter()
        .enumerate()
        .map(|(i, cfg)| (i / per_template, cfg))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let records: Vec<RunRecord> = pool.install(|| {
        runs.par_iter()
            .map(|(t, cfg)| execute(cfg, registry, grids[*t].clone()).map(|e| e.record))
            .collect::<Result<_>>()
    })?;

    let summaries = records.chunks(spec.seeds.len()).map(summarize).collect();
    Ok(BenchmarkOutput { records, summaries })
}

pub fn write_csv(records: &[RunRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(input: impl std::io::Read) -> Result<Vec<RunRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(csv_error))
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

pub fn write_summary(summaries: &[Summary], mut out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, summaries).map_err(|e| Error::Io(e.into()))?;
    out.write_all(b"\n")?;
    Ok(())
}
