//! Samplers: where the next configuration to try comes from.
//!
//! Planners only see the [`Sampler`] trait, so any sampler can be paired with
//! any planner. RNG consumption per call (one draw = one `u64`):
//!
//! | sampler       | branch                  | draws                       |
//! |---------------|-------------------------|-----------------------------|
//! | `uniform`     | always                  | `d`, one per coordinate     |
//! | `goal_biased` | goal returned           | 1                           |
//! | `goal_biased` | otherwise               | `1 + d`                     |
//! | `informed`    | no solution yet         | `d` (same as uniform)       |
//! | `informed`    | per ellipsoid attempt   | `2 * ceil(d / 2) + 1`       |

use crate::cspace::{dist, Bounds, Configuration};
use crate::error::{contract, Error, Result};
use crate::rng::Rng;

/// Consecutive out-of-bounds draws tolerated by the informed sampler.
pub const INFORMED_MAX_REJECTIONS: usize = 1000;

/// What a sampler may know about the planning problem.
#[derive(Debug, Clone)]
pub struct SamplerContext {
    pub bounds: Bounds,
    pub start: Configuration,
    pub goal: Configuration,
    /// Cost of the best solution so far, `+inf` if none.
    pub best_cost: f64,
}

impl SamplerContext {
    pub fn new(bounds: Bounds, start: Configuration, goal: Configuration) -> Result<Self> {
        for q in [&start, &goal] {
            if q.dim() != bounds.dim() {
                return Err(Error::DimensionMismatch {
                    expected: bounds.dim(),
                    got: q.dim(),
                });
            }
        }
        Ok(Self {
            bounds,
            start,
            goal,
            best_cost: f64::INFINITY,
        })
    }
}

pub trait Sampler: Send {
    fn name(&self) -> &str;

    /// Draws a configuration inside `ctx.bounds` (half-open).
    fn next(&mut self, ctx: &SamplerContext, rng: &mut Rng) -> Result<Configuration>;

    /// Feedback from the owning planner about the last sample's fate.
    fn report(&mut self, accepted: bool);

    fn report_count(&self) -> u64;
}

/// Construction parameters handed to sampler factories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerParams {
    pub p_goal: f64,
}

impl Default for SamplerParams {
    fn default() -> Self {
        Self { p_goal: 0.05 }
    }
}

pub fn uniform_next(ctx: &SamplerContext, rng: &mut Rng) -> Configuration {
    let b = &ctx.bounds;
    let coords: Vec<f64> = b.lo().iter().zip(b.hi()).map(|(&lo, &hi)| rng.range(lo, hi)).collect();
    Configuration::new(coords).expect("bounded draws are finite")
}

pub fn goal_biased_next(ctx: &SamplerContext, rng: &mut Rng, p_goal: f64) -> Result<Configuration> {
    check_p_goal(p_goal)?;
    if rng.next_f64() < p_goal {
        return Ok(ctx.goal.clone());
    }
    Ok(uniform_next(ctx, rng))
}

/// Uniform over the prolate hyperspheroid `{q : |q - start| + |q - goal| <= best_cost}`
/// intersected with the bounds; uniform over the bounds while `best_cost` is infinite.
pub fn informed_next(ctx: &SamplerContext, rng: &mut Rng) -> Result<Configuration> {
    if ctx.best_cost.is_infinite() {
        return Ok(uniform_next(ctx, rng));
    }
    let ellipsoid = InformedSet::new(ctx)?;
    for _ in 0..INFORMED_MAX_REJECTIONS {
        let coords = ellipsoid.sample(rng);
        if ctx.bounds.contains_half_open(&coords) {
            return Configuration::new(coords);
        }
    }
    Err(Error::SamplerExhausted {
        attempts: INFORMED_MAX_REJECTIONS,
    })
}

fn check_p_goal(p_goal: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p_goal) {
        return Err(contract(format!("p_goal must lie in [0, 1], got {p_goal}")));
    }
    Ok(())
}

struct InformedSet {
    centre: Vec<f64>,
    /// Semi-axes: transverse first, then the conjugate one repeated.
    transverse: f64,
    conjugate: f64,
    /// Householder vector mapping e1 onto the start->goal direction; `None`
    /// when the direction already is e1 or undefined.
    reflector: Option<Vec<f64>>,
}

impl InformedSet {
    fn new(ctx: &SamplerContext) -> Result<Self> {
        let (s, g) = (ctx.start.as_slice(), ctx.goal.as_slice());
        let c_min = dist(s, g);
        let mut c_best = ctx.best_cost;
        if c_best.is_nan() || c_best < c_min {
            // rounding in path sums can land a straight-line cost an ulp below c_min
            if c_best.is_finite() && c_min - c_best <= 1e-9 * c_min.max(1.0) {
                c_best = c_min;
            } else {
                return Err(contract(format!(
                    "best cost {c_best} is below the start-goal distance {c_min}"
                )));
            }
        }
        let centre: Vec<f64> = s.iter().zip(g).map(|(a, b)| 0.5 * (a + b)).collect();
        let conjugate = 0.5 * (c_best * c_best - c_min * c_min).max(0.0).sqrt();
        let reflector = (c_min > 0.0)
            .then(|| {
                let mut v: Vec<f64> = s.iter().zip(g).map(|(a, b)| -(b - a) / c_min).collect();
                v[0] += 1.0;
                v
            })
            .filter(|v| v.iter().map(|x| x * x).sum::<f64>() > 1e-24);
        Ok(Self {
            centre,
            transverse: 0.5 * c_best,
            conjugate,
            reflector,
        })
    }

    fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        let d = self.centre.len();
        let mut x = unit_ball(d, rng);
        x[0] *= self.transverse;
        x[1..].iter_mut().for_each(|v| *v *= self.conjugate);
        if let Some(v) = &self.reflector {
            let vv: f64 = v.iter().map(|a| a * a).sum();
            let vx: f64 = v.iter().zip(&x).map(|(a, b)| a * b).sum();
            let k = 2.0 * vx / vv;
            x.iter_mut().zip(v).for_each(|(xi, vi)| *xi -= k * vi);
        }
        x.iter().zip(&self.centre).map(|(a, c)| a + c).collect()
    }
}

/// Uniform point in the unit d-ball: normalised Gaussian direction scaled by
/// `U^(1/d)`. Consumes `2 * ceil(d / 2) + 1` draws.
pub(crate) fn unit_ball(d: usize, rng: &mut Rng) -> Vec<f64> {
    let mut x = Vec::with_capacity(d + 1);
    while x.len() < d {
        let (a, b) = rng.normal_pair();
        x.push(a);
        x.push(b);
    }
    x.truncate(d);
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let radius = rng.next_f64().powf(1.0 / d as f64);
    if norm == 0.0 {
        return vec![0.0; d];
    }
    x.iter_mut().for_each(|v| *v *= radius / norm);
    x
}

#[derive(Debug, Default, Clone)]
pub struct UniformSampler {
    reports: u64,
}

impl Sampler for UniformSampler {
    fn name(&self) -> &str {
        "uniform"
    }

    fn next(&mut self, ctx: &SamplerContext, rng: &mut Rng) -> Result<Configuration> {
        Ok(uniform_next(ctx, rng))
    }

    fn report(&mut self, _accepted: bool) {
        self.reports += 1;
    }

    fn report_count(&self) -> u64 {
        self.reports
    }
}

#[derive(Debug, Clone)]
pub struct GoalBiasedSampler {
    p_goal: f64,
    reports: u64,
}

impl GoalBiasedSampler {
    pub fn new(p_goal: f64) -> Result<Self> {
        check_p_goal(p_goal)?;
        Ok(Self { p_goal, reports: 0 })
    }

    pub fn p_goal(&self) -> f64 {
        self.p_goal
    }
}

impl Sampler for GoalBiasedSampler {
    fn name(&self) -> &str {
        "goal_biased"
    }

    fn next(&mut self, ctx: &SamplerContext, rng: &mut Rng) -> Result<Configuration> {
        goal_biased_next(ctx, rng, self.p_goal)
    }

    fn report(&mut self, _accepted: bool) {
        self.reports += 1;
    }

    fn report_count(&self) -> u64 {
        self.reports
    }
}

#[derive(Debug, Default, Clone)]
pub struct InformedSampler {
    reports: u64,
}

impl Sampler for InformedSampler {
    fn name(&self) -> &str {
        "informed"
    }

    fn next(&mut self, ctx: &SamplerContext, rng: &mut Rng) -> Result<Configuration> {
        informed_next(ctx, rng)
    }

    fn report(&mut self, _accepted: bool) {
        self.reports += 1;
    }

    fn report_count(&self) -> u64 {
        self.reports
    }
}
