//! Configuration-space primitives.
//!
//! A [`Configuration`] is a finite real vector of fixed dimension. All
//! environments share the Euclidean metric, including arm joint spaces,
//! whose bounds keep angles inside `[-pi, pi]` so no wrap-around is needed.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Configuration(Box<[f64]>);

impl Configuration {
    /// Builds a configuration, rejecting NaN/Inf coordinates and d < 1.
    pub fn new(coords: impl Into<Vec<f64>>) -> Result<Self> {
        let coords: Vec<f64> = coords.into();
        if coords.is_empty() {
            return Err(contract("configuration must have at least one coordinate"));
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self(coords.into_boxed_slice()))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn distance(&self, other: &Configuration) -> Result<f64> {
        same_dim(self, other)?;
        Ok(dist(&self.0, &other.0))
    }

    /// `self + t (other - self)`, exact at both endpoints.
    pub fn interpolate(&self, other: &Configuration, t: f64) -> Result<Configuration> {
        same_dim(self, other)?;
        if !(0.0..=1.0).contains(&t) {
            return Err(contract(format!("interpolation parameter {t} outside [0, 1]")));
        }
        Ok(Self(lerp(&self.0, &other.0, t)))
    }

    /// Moves from `self` toward `to` by at most `eps`. Returns `to` verbatim
    /// when it is already within reach.
    pub fn steer(&self, to: &Configuration, eps: f64) -> Result<Configuration> {
        same_dim(self, to)?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(contract(format!("steer step must be positive, got {eps}")));
        }
        Ok(steer_unchecked(self, to, eps))
    }
}

impl Index<usize> for Configuration {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl TryFrom<Vec<f64>> for Configuration {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Configuration::new(v)
    }
}

impl From<Configuration> for Vec<f64> {
    fn from(q: Configuration) -> Vec<f64> {
        q.0.into_vec()
    }
}

pub fn distance(a: &Configuration, b: &Configuration) -> Result<f64> {
    a.distance(b)
}

pub fn interpolate(a: &Configuration, b: &Configuration, t: f64) -> Result<Configuration> {
    a.interpolate(b, t)
}

pub fn steer(from: &Configuration, to: &Configuration, eps: f64) -> Result<Configuration> {
    from.steer(to, eps)
}

/// Per-dimension closed sampling intervals `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Bounds {
    pub fn new(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let (lo, hi): (Vec<f64>, Vec<f64>) = intervals.into_iter().unzip();
        if lo.is_empty() {
            return Err(contract("bounds must have at least one dimension"));
        }
        for (i, (l, h)) in lo.iter().zip(&hi).enumerate() {
            if !(l.is_finite() && h.is_finite() && l < h) {
                return Err(contract(format!("bounds[{i}] = [{l}, {h}] is not a valid interval")));
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, q: &Configuration) -> bool {
        q.dim() == self.dim()
            && q.as_slice()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (l, h))| l <= v && v <= h)
    }

    /// Half-open containment `[lo, hi)`, which is what samplers guarantee.
    pub fn contains_half_open(&self, coords: &[f64]) -> bool {
        coords.len() == self.dim()
            && coords
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (l, h))| l <= v && v < h)
    }
}

pub(crate) fn same_dim(a: &Configuration, b: &Configuration) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub(crate) fn lerp(a: &[f64], b: &[f64], t: f64) -> Box<[f64]> {
    if t == 1.0 {
        return b.into();
    }
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

pub(crate) fn steer_unchecked(from: &Configuration, to: &Configuration, eps: f64) -> Configuration {
    let d = dist(&from.0, &to.0);
    if d <= eps {
        return to.clone();
    }
    let s = eps / d;
    Configuration(from.0.iter().zip(to.0.iter()).map(|(a, b)| a + s * (b - a)).collect())
}

/// Sum of segment lengths along a path.
pub fn path_length(path: &[Configuration]) -> f64 {
    path.windows(2).map(|w| dist(&w[0].0, &w[1].0)).sum()
}
