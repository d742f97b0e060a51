//! Reproducible random stream.
//!
//! The generator is xoshiro256++ whose 256-bit state is expanded from the
//! 64-bit seed with splitmix64 (`rand_xoshiro`'s `seed_from_u64`). Floats
//! take the top 53 bits of one `u64`: `(x >> 11) * 2^-53`, in `[0, 1)`.
//! Every draw documented by the samplers is one such `u64`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Debug, Clone)]
pub struct Rng {
    inner: Xoshiro256PlusPlus,
    draws: u64,
}

impl Rng {
    pub fn seed_from_u64(seed: u64) -> Self {
        Self {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
            draws: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.draws += 1;
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`; never returns `hi`, even for tiny intervals.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        let v = lo + (hi - lo) * self.next_f64();
        if v >= hi {
            hi.next_down().max(lo)
        } else {
            v
        }
    }

    /// Pair of independent standard normals (Box-Muller, two draws).
    pub fn normal_pair(&mut self) -> (f64, f64) {
        // 1 - u lies in (0, 1], keeping the log finite
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        (r * c, r * s)
    }

    /// Number of `u64` values consumed so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }
}
