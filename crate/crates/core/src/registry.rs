//! Name-keyed factories for planners and samplers.
//!
//! Built-ins are registered by [`Registry::with_builtins`]; plugins call
//! [`Registry::register_planner`] / [`Registry::register_sampler`] at startup
//! and become selectable by name everywhere (configs, CLI) without touching
//! framework code. Names match `[a-z][a-z0-9_]*`.

use std::collections::BTreeMap;

use crate::error::{RegistryError, Result};
use crate::planners::{Planner, Prm, Rrt, RrtConnect, RrtStar};
use crate::samplers::{GoalBiasedSampler, InformedSampler, Sampler, SamplerParams, UniformSampler};

pub type PlannerFactory = Box<dyn Fn() -> Box<dyn Planner> + Send + Sync>;
pub type SamplerFactory = Box<dyn Fn(&SamplerParams) -> Result<Box<dyn Sampler>> + Send + Sync>;

pub const BUILTIN_PLANNERS: [&str; 4] = ["prm", "rrt", "rrt_connect", "rrt_star"];
pub const BUILTIN_SAMPLERS: [&str; 3] = ["goal_biased", "informed", "uniform"];

#[derive(Default)]
pub struct Registry {
    planners: BTreeMap<String, PlannerFactory>,
    samplers: BTreeMap<String, SamplerFactory>,
}

impl std::fmt::Debug for Registry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Registry")
            .field("planners", &self.list_planners())
            .field("samplers", &self.list_samplers())
            .finish()
    }
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn insert<F>(map: &mut BTreeMap<String, F>, kind: &'static str, name: &str, factory: F) -> Result<(), RegistryError> {
    if !is_valid_name(name) {
        return Err(RegistryError::InvalidName {
            kind,
            name: name.to_string(),
        });
    }
    if map.contains_key(name) {
        return Err(RegistryError::Conflict {
            kind,
            name: name.to_string(),
        });
    }
    map.insert(name.to_string(), factory);
    Ok(())
}

impl Registry {
    /// A registry without any entries.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        let builtins: [(&str, PlannerFactory); 4] = [
            ("rrt", Box::new(|| Box::new(Rrt::new()))),
            ("rrt_star", Box::new(|| Box::new(RrtStar::new()))),
            ("rrt_connect", Box::new(|| Box::new(RrtConnect::new()))),
            ("prm", Box::new(|| Box::new(Prm::new()))),
        ];
        for (name, f) in builtins {
            r.planners.insert(name.to_string(), f);
        }
        let samplers: [(&str, SamplerFactory); 3] = [
            ("uniform", Box::new(|_| Ok(Box::new(UniformSampler::default())))),
            (
                "goal_biased",
                Box::new(|p| Ok(Box::new(GoalBiasedSampler::new(p.p_goal)?))),
            ),
            ("informed", Box::new(|_| Ok(Box::new(InformedSampler::default())))),
        ];
        for (name, f) in samplers {
            r.samplers.insert(name.to_string(), f);
        }
        r
    }

    pub fn register_planner<F>(&mut self, name: &str, factory: F) -> Result<(), RegistryError>
    where
        F: Fn() -> Box<dyn Planner> + Send + Sync + 'static,
    {
        insert(&mut self.planners, "planner", name, Box::new(factory))
    }

    pub fn register_sampler<F>(&mut self, name: &str, factory: F) -> Result<(), RegistryError>
    where
        F: Fn(&SamplerParams) -> Result<Box<dyn Sampler>> + Send + Sync + 'static,
    {
        insert(&mut self.samplers, "sampler", name, Box::new(factory))
    }

    pub fn create_planner(&self, name: &str) -> Result<Box<dyn Planner>, RegistryError> {
        self.planners
            .get(name)
            .map(|f| f())
            .ok_or_else(|| RegistryError::NotFound {
                kind: "planner",
                name: name.to_string(),
                available: self.list_planners(),
            })
    }

    pub fn create_sampler(&self, name: &str, params: &SamplerParams) -> Result<Box<dyn Sampler>> {
        let f = self.samplers.get(name).ok_or_else(|| RegistryError::NotFound {
            kind: "sampler",
            name: name.to_string(),
            available: self.list_samplers(),
        })?;
        f(params)
    }

    pub fn has_planner(&self, name: &str) -> bool {
        self.planners.contains_key(name)
    }

    pub fn has_sampler(&self, name: &str) -> bool {
        self.samplers.contains_key(name)
    }

    pub fn list_planners(&self) -> Vec<String> {
        self.planners.keys().cloned().collect()
    }

    pub fn list_samplers(&self) -> Vec<String> {
        self.samplers.keys().cloned().collect()
    }
}
