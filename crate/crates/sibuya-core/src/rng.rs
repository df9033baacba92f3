//! Counter-based random streams for reproducible Monte Carlo.
//!
//! A [`Stream`] walks a Weyl sequence through the SplitMix64 finalizer.
//! Independent substreams are derived by hashing a parent key together
//! with a child index ([`derive_key`]), so every sample row (and every
//! sector within a row) owns a private stream determined solely by
//! `(seed, row, sector)`. Generation order and thread scheduling cannot
//! change the output, which is what makes batch sampling byte-identical
//! across thread counts.
//!
//! Uniform variates live in the open interval `(0, 1)`: a trigger of
//! exactly zero would postpone a default forever and a unit exponential
//! of exactly zero would produce tied occurrence times.

use crate::fmath;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const KEY_SALT: u64 = 0xA076_1D64_78BD_642F;

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the key of child `index` from a parent key.
///
/// The derivation is pure: `derive_key(k, i)` never depends on how many
/// other children were derived or in which order.
#[inline]
pub fn derive_key(parent: u64, index: u64) -> u64 {
    mix64(mix64(parent ^ KEY_SALT).wrapping_add(index.wrapping_mul(GOLDEN_GAMMA)))
}

/// A deterministic 64-bit random stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    state: u64,
}

impl Stream {
    /// Creates the stream identified by `key`.
    pub fn new(key: u64) -> Self {
        Stream { state: key }
    }

    /// Creates the stream of child `index` under `parent`.
    pub fn substream(parent: u64, index: u64) -> Self {
        Stream::new(derive_key(parent, index))
    }

    /// Next raw 64-bit word.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform variate in the open interval `(0, 1)`.
    ///
    /// Uses the top 53 bits shifted to the midpoints of the dyadic grid,
    /// so 0 and 1 are unreachable and every value is equally likely.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * ID53
    }

    /// Standard exponential variate by inversion, `-ln(1 - U)`.
    #[inline]
    pub fn next_exponential(&mut self) -> f64 {
        -fmath::ln(1.0 - self.next_uniform())
    }
}

const ID53: f64 = 1.0 / 9_007_199_254_740_992.0; // 2^-53
