//! JSON run and benchmark configuration.
//!
//! A document with a top-level `templates` key is a benchmark; anything else
//! is a single plan. Unknown keys are rejected everywhere.
//!
//! ```json
//! { "map": "maps/empty.pgm", "planner": "rrt", "start": [10, 10], "goal": [90, 90] }
//! ```
//!
//! ```json
//! {
//!   "templates": [{ "id": "empty", "map": "empty.pgm", "start": [10, 10], "goal": [90, 90] }],
//!   "planners": ["rrt", "rrt_star"],
//!   "seeds": { "start": 1, "count": 20 }
//! }
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use crate::cspace::Configuration;
use crate::error::{Error, Result};
use crate::planners::PlannerParams;
use crate::registry::Registry;
use crate::samplers::SamplerParams;

pub const DEFAULT_SAMPLER: &str = "goal_biased";
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, PartialEq)]
pub enum EnvSpec {
    Point,
    Arm { base: (f64, f64), link_lengths: Vec<f64> },
}

impl EnvSpec {
    pub fn dim(&self) -> usize {
        match self {
            EnvSpec::Point => 2,
            EnvSpec::Arm { link_lengths, .. } => link_lengths.len(),
        }
    }
}

/// Everything about a run except the planner and the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub map_path: PathBuf,
    pub env: EnvSpec,
    pub sampler: String,
    pub start: Configuration,
    pub goal: Configuration,
    pub params: PlannerParams,
    pub sampler_params: SamplerParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanConfig {
    pub scenario: Scenario,
    pub planner: String,
    pub seed: u64,
    pub record_out: Option<PathBuf>,
    pub svg_out: Option<PathBuf>,
}

/// Templates × planners × seeds, run in that nesting order.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSpec {
    pub templates: Vec<Scenario>,
    pub planners: Vec<String>,
    /// Ascending and distinct.
    pub seeds: Vec<u64>,
}

impl BenchmarkSpec {
    /// Every run in canonical output order.
    pub fn runs(&self) -> Vec<PlanConfig> {
        let mut out = Vec::with_capacity(self.templates.len() * self.planners.len() * self.seeds.len());
        for t in &self.templates {
            for p in &self.planners {
                for &seed in &self.seeds {
                    out.push(PlanConfig {
                        scenario: t.clone(),
                        planner: p.clone(),
                        seed,
                        record_out: None,
                        svg_out: None,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigDoc {
    Plan(PlanConfig),
    Benchmark(BenchmarkSpec),
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawEnvKind {
    #[default]
    Point,
    Arm,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArm {
    base: [f64; 2],
    link_lengths: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlan {
    id: Option<String>,
    map: String,
    #[serde(default)]
    env: RawEnvKind,
    arm: Option<RawArm>,
    planner: Option<String>,
    sampler: Option<String>,
    start: Vec<f64>,
    goal: Vec<f64>,
    seed: Option<u64>,
    max_nodes: Option<usize>,
    eps: Option<f64>,
    goal_radius: Option<f64>,
    p_goal: Option<f64>,
    prm_k: Option<usize>,
    rewire_multiplier: Option<f64>,
    record_out: Option<String>,
    svg_out: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBenchmark {
    templates: Vec<RawPlan>,
    planners: Vec<String>,
    seeds: Value,
}

fn field(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.into(),
        message: message.into(),
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn typed<T: for<'de> Deserialize<'de>>(value: Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        field(
            if path == "." { String::new() } else { path },
            e.into_inner().to_string(),
        )
    })
}

/// Parses and validates a config document.
pub fn parse_config(json_text: &str, registry: &Registry) -> Result<ConfigDoc> {
    let value: Value = serde_json::from_str(json_text).map_err(|e| Error::ConfigSyntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let is_benchmark = value.as_object().is_some_and(|o| o.contains_key("templates"));
    if is_benchmark {
        let raw: RawBenchmark = typed(value)?;
        validate_benchmark(raw, registry).map(ConfigDoc::Benchmark)
    } else {
        let raw: RawPlan = typed(value)?;
        validate_plan(raw, registry).map(ConfigDoc::Plan)
    }
}

/// Reads a config file; relative paths inside it resolve against its directory.
pub fn load_config(path: &Path, registry: &Registry) -> Result<ConfigDoc> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read config {}: {e}", path.display())))?;
    let mut doc = parse_config(&text, registry)?;
    let base = path.parent().unwrap_or(Path::new(""));
    doc.resolve_paths(base);
    Ok(doc)
}

impl ConfigDoc {
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match self {
            ConfigDoc::Plan(cfg) => {
                fix(&mut cfg.scenario.map_path);
                cfg.record_out.as_mut().map(fix);
                cfg.svg_out.as_mut().map(fix);
            }
            ConfigDoc::Benchmark(spec) => spec.templates.iter_mut().for_each(|t| fix(&mut t.map_path)),
        }
    }
}

fn validate_plan(mut raw: RawPlan, registry: &Registry) -> Result<PlanConfig> {
    let planner = raw
        .planner
        .take()
        .ok_or_else(|| field("planner", "missing required field"))?;
    check_planner(&planner, "planner", registry)?;
    let seed = raw.seed.take().unwrap_or(DEFAULT_SEED);
    let record_out = raw.record_out.take().map(PathBuf::from);
    let svg_out = raw.svg_out.take().map(PathBuf::from);
    let scenario = validate_scenario(raw, "", registry)?;
    Ok(PlanConfig {
        scenario,
        planner,
        seed,
        record_out,
        svg_out,
    })
}

fn validate_benchmark(raw: RawBenchmark, registry: &Registry) -> Result<BenchmarkSpec> {
    if raw.templates.is_empty() {
        return Err(field("templates", "at least one template is required"));
    }
    if raw.planners.is_empty() {
        return Err(field("planners", "at least one planner is required"));
    }
    let mut seen = BTreeSet::new();
    for (i, p) in raw.planners.iter().enumerate() {
        check_planner(p, &format!("planners[{i}]"), registry)?;
        if !seen.insert(p.as_str()) {
            return Err(field(format!("planners[{i}]"), format!("duplicate planner '{p}'")));
        }
    }
    let seeds = parse_seeds(&raw.seeds)?;

    let mut templates = Vec::with_capacity(raw.templates.len());
    let mut ids = BTreeSet::new();
    for (i, t) in raw.templates.into_iter().enumerate() {
        let prefix = format!("templates[{i}]");
        for (key, present) in [
            ("planner", t.planner.is_some()),
            ("seed", t.seed.is_some()),
            ("record_out", t.record_out.is_some()),
            ("svg_out", t.svg_out.is_some()),
        ] {
            if present {
                return Err(field(join(&prefix, key), "not allowed in a benchmark template"));
            }
        }
        let scenario = validate_scenario(t, &prefix, registry)?;
        if !ids.insert(scenario.id.clone()) {
            return Err(field(
                join(&prefix, "id"),
                format!("duplicate template id '{}'", scenario.id),
            ));
        }
        templates.push(scenario);
    }
    Ok(BenchmarkSpec {
        templates,
        planners: raw.planners,
        seeds,
    })
}

/// Either an explicit list or `{"start": s, "count": n}` for `s..s+n`.
fn parse_seeds(value: &Value) -> Result<Vec<u64>> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Range {
        start: u64,
        count: u64,
    }
    let seeds: Vec<u64> = match value {
        Value::Array(_) => typed::<Vec<u64>>(value.clone()).map_err(|e| prefix_error(e, "seeds"))?,
        Value::Object(_) => {
            let r: Range = typed(value.clone()).map_err(|e| prefix_error(e, "seeds"))?;
            let end = r
                .start
                .checked_add(r.count)
                .ok_or_else(|| field("seeds.count", "seed range overflows u64"))?;
            (r.start..end).collect()
        }
        _ => return Err(field("seeds", "expected a list of seeds or {\"start\", \"count\"}")),
    };
    if seeds.is_empty() {
        return Err(field("seeds", "at least one seed is required"));
    }
    let distinct: BTreeSet<u64> = seeds.iter().copied().collect();
    if distinct.len() != seeds.len() {
        return Err(field("seeds", "seeds must be distinct"));
    }
    Ok(distinct.into_iter().collect())
}

fn prefix_error(e: Error, prefix: &str) -> Error {
    match e {
        Error::Config { path, message } => {
            let path = if path.is_empty() {
                prefix.to_string()
            } else if path.starts_with('[') {
                format!("{prefix}{path}")
            } else {
                join(prefix, &path)
            };
            field(path, message)
        }
        other => other,
    }
}

fn check_planner(name: &str, path: &str, registry: &Registry) -> Result<()> {
    registry
        .create_planner(name)
        .map(drop)
        .map_err(|e| field(path, e.to_string()))
}

fn validate_scenario(raw: RawPlan, prefix: &str, registry: &Registry) -> Result<Scenario> {
    let at = |key: &str| join(prefix, key);

    let env = match (raw.env, raw.arm) {
        (RawEnvKind::Point, None) => EnvSpec::Point,
        (RawEnvKind::Point, Some(_)) => return Err(field(at("arm"), "only allowed when env is \"arm\"")),
        (RawEnvKind::Arm, None) => return Err(field(at("arm"), "required when env is \"arm\"")),
        (RawEnvKind::Arm, Some(arm)) => {
            if arm.link_lengths.len() < 2 {
                return Err(field(at("arm.link_lengths"), "an arm needs at least 2 links"));
            }
            if let Some(i) = arm.link_lengths.iter().position(|l| !(l.is_finite() && *l > 0.0)) {
                return Err(field(
                    format!("{}[{i}]", at("arm.link_lengths")),
                    "link lengths must be positive",
                ));
            }
            if !arm.base.iter().all(|v| v.is_finite()) {
                return Err(field(at("arm.base"), "base must be finite"));
            }
            EnvSpec::Arm {
                base: (arm.base[0], arm.base[1]),
                link_lengths: arm.link_lengths,
            }
        }
    };

    let sampler = raw.sampler.unwrap_or_else(|| DEFAULT_SAMPLER.to_string());
    let p_goal = raw.p_goal.unwrap_or(SamplerParams::default().p_goal);
    if !(0.0..=1.0).contains(&p_goal) {
        return Err(field(at("p_goal"), format!("must lie in [0, 1], got {p_goal}")));
    }
    let sampler_params = SamplerParams { p_goal };
    registry
        .create_sampler(&sampler, &sampler_params)
        .map_err(|e| field(at("sampler"), e.to_string()))?;

    let defaults = PlannerParams::default();
    let params = PlannerParams {
        max_nodes: raw.max_nodes.unwrap_or(defaults.max_nodes),
        eps: raw.eps.unwrap_or(defaults.eps),
        goal_radius: raw.goal_radius.unwrap_or(defaults.goal_radius),
        rewire_multiplier: raw.rewire_multiplier.unwrap_or(defaults.rewire_multiplier),
        prm_k: raw.prm_k.unwrap_or(defaults.prm_k),
    };
    if params.max_nodes < 1 {
        return Err(field(at("max_nodes"), "must be at least 1"));
    }
    if params.prm_k < 1 {
        return Err(field(at("prm_k"), "must be at least 1"));
    }
    for (key, v, allow_zero) in [
        ("eps", params.eps, false),
        ("goal_radius", params.goal_radius, true),
        ("rewire_multiplier", params.rewire_multiplier, false),
    ] {
        let ok = v.is_finite() && (v > 0.0 || (allow_zero && v == 0.0));
        if !ok {
            let want = if allow_zero { "non-negative" } else { "positive" };
            return Err(field(at(key), format!("must be {want}, got {v}")));
        }
    }

    let dim = env.dim();
    let start = config_field(raw.start, dim, &at("start"))?;
    let goal = config_field(raw.goal, dim, &at("goal"))?;

    let map_path = PathBuf::from(&raw.map);
    if raw.map.is_empty() {
        return Err(field(at("map"), "must not be empty"));
    }
    let id = match raw.id {
        Some(id) if id.is_empty() => return Err(field(at("id"), "must not be empty")),
        Some(id) => id,
        None => map_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "plan".to_string()),
    };

    Ok(Scenario {
        id,
        map_path,
        env,
        sampler,
        start,
        goal,
        params,
        sampler_params,
    })
}

fn config_field(coords: Vec<f64>, dim: usize, path: &str) -> Result<Configuration> {
    if coords.len() != dim {
        return Err(field(path, format!("expected {dim} coordinates, got {}", coords.len())));
    }
    Configuration::new(coords).map_err(|e| field(path, e.to_string()))
}
