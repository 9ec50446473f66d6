//! Seed derivation. Every stochastic choice draws from a ChaCha8 stream
//! keyed by a [`Seed`]; independent substreams are obtained with
//! [`Seed::derive`], so a whole experiment is reproducible from one number.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::Scalar;

/// Substream labels used across the crate.
pub mod stream {
    pub const INIT: u64 = 1;
    pub const DICTIONARY: u64 = 2;
    pub const SUPPORTS: u64 = 3;
    pub const COEFFICIENTS: u64 = 4;
    pub const NOISE: u64 = 5;
    pub const PATCHES: u64 = 6;
    pub const RUN: u64 = 7;
    pub const POINT: u64 = 8;
    pub const TEXTURE: u64 = 9;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Seed {
    /// Child seed for substream `label`; distinct labels give unrelated streams.
    pub fn derive(self, label: u64) -> Seed {
        Seed(splitmix64(self.0 ^ splitmix64(label.wrapping_add(0x5EED))))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(value: u64) -> Self {
        Seed(value)
    }
}

pub fn standard_normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    let v: f64 = rng.sample(StandardNormal);
    T::of(v)
}

/// Uniform index in `0..n`, drawn through a `u64` range so the sequence
/// does not depend on the platform's pointer width.
pub fn index_below<R: Rng + ?Sized>(rng: &mut R, n: usize) -> usize {
    rng.random_range(0..n as u64) as usize
}

/// `k` distinct indices from `0..n` in draw order (partial Fisher-Yates).
pub fn distinct_indices<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    assert!(k <= n);
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + index_below(rng, n - i);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}
