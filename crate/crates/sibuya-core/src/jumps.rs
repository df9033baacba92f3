//! The common jump process shared by all entities.
//!
//! The concrete process is `J_t = H * N_t`: a non-homogeneous Poisson
//! process `N` with integrated rate `I(t)`, each occurrence scaled by a
//! constant jump size `H >= 0`. Everything downstream consumes the
//! process through exactly two operations, so other subordinator-type
//! jump processes can slot in later without touching dependents:
//!
//! - [`JumpModel::lst_increment`]: the Laplace–Stieltjes transform of an
//!   increment, `E[exp(-x (J_t - J_s))] = exp(-(I(t) - I(s)) (1 - e^{-xH}))`,
//! - [`JumpModel::occurrences`]: lazy occurrence-time sampling by
//!   inversion of a unit-rate homogeneous process (cumulative standard
//!   exponentials mapped through the inverse integrated rate).

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::rates::RateFunction;
use crate::rng::Stream;

/// Scaled Poisson jump process: constant jump size and a deterministic
/// occurrence intensity.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpModel {
    jump_size: f64,
    intensity: RateFunction,
}

impl JumpModel {
    /// Creates a jump process with jump size `H >= 0` and the given
    /// occurrence intensity.
    pub fn new(jump_size: f64, intensity: RateFunction) -> Result<Self> {
        if !jump_size.is_finite() || jump_size < 0.0 {
            return Err(Error::Config(format!(
                "jump size must be finite and non-negative, got {jump_size}"
            )));
        }
        Ok(JumpModel {
            jump_size,
            intensity,
        })
    }

    /// The constant jump size `H`.
    pub fn jump_size(&self) -> f64 {
        self.jump_size
    }

    /// The occurrence intensity of the underlying Poisson process.
    pub fn intensity(&self) -> &RateFunction {
        &self.intensity
    }

    /// `1 - e^{-H}`, the per-occurrence damping of survival at transform
    /// argument one.
    pub(crate) fn size_factor(&self) -> f64 {
        fmath::one_minus_exp_neg(self.jump_size)
    }

    /// Laplace–Stieltjes transform of the increment `J_t - J_s` at `x`:
    /// `exp(-(I(t) - I(s)) (1 - e^{-xH}))`, a value in `(0, 1]`.
    pub fn lst_increment(&self, s: f64, t: f64, x: f64) -> Result<f64> {
        if !(s.is_finite() && t.is_finite()) || s < 0.0 || s > t {
            return Err(Error::Domain(format!(
                "increment requires 0 <= s <= t, got s = {s}, t = {t}"
            )));
        }
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Domain(format!(
                "transform argument must be non-negative, got {x}"
            )));
        }
        let mass = (self.intensity.integrate(t)? - self.intensity.integrate(s)?).max(0.0);
        Ok(fmath::exp(
            -mass * fmath::one_minus_exp_neg(x * self.jump_size),
        ))
    }

    /// Lazy occurrence-time sampling: yields the strictly increasing
    /// occurrence times of the Poisson process, ending when the
    /// integrated intensity range is exhausted.
    pub fn occurrences(&self, stream: Stream) -> Occurrences<'_> {
        Occurrences {
            intensity: &self.intensity,
            stream,
            unit_time: 0.0,
            done: false,
        }
    }

    /// Collects occurrence times until `stop(k, t_k)` holds for the
    /// (1-based) `k`-th occurrence, which is then excluded, or until the
    /// intensity range is exhausted.
    pub fn sample_occurrences<F>(&self, stream: Stream, mut stop: F) -> Vec<f64>
    where
        F: FnMut(usize, f64) -> bool,
    {
        let mut times = Vec::new();
        for (index, t) in self.occurrences(stream).enumerate() {
            if stop(index + 1, t) {
                break;
            }
            times.push(t);
        }
        times
    }
}

/// Iterator over occurrence times of the jump process.
#[derive(Debug, Clone)]
pub struct Occurrences<'a> {
    intensity: &'a RateFunction,
    stream: Stream,
    unit_time: f64,
    done: bool,
}

impl Iterator for Occurrences<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.done {
            return None;
        }
        self.unit_time += self.stream.next_exponential();
        match self.intensity.inverse_integrated(self.unit_time) {
            Ok(t) => Some(t),
            Err(_) => {
                self.done = true;
                None
            }
        }
    }
}
