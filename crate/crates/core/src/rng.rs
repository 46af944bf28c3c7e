//! Reproducible randomness.
//!
//! Every random stream is a ChaCha20 generator seeded from a 64-bit seed and
//! placed on its own stream number, so row `n` of an ensemble (or trial `t`
//! of an experiment) draws the same numbers regardless of evaluation order
//! or worker count.
//!
//! Standard normals use the Box–Muller transform on two uniforms built from
//! the top 53 bits of consecutive `u64` draws:
//!
//! ```text
//! u1 = (floor(w1 / 2^11) + 1) / 2^53      in (0, 1]
//! u2 =  floor(w2 / 2^11)      / 2^53      in [0, 1)
//! z1 = sqrt(-2 ln u1) cos(2 pi u2)
//! z2 = sqrt(-2 ln u1) sin(2 pi u2)
//! ```
//!
//! Both outputs of a pair are used, in order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer. A bijection on `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` under a base seed. Injective in `index` for a fixed
/// base, so trials never share a seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    mix64(base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// A keyed stream: same `(seed, stream)` always yields the same sequence.
pub fn stream(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Box–Muller standard normal source over any `RngCore`.
pub struct NormalSampler<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: RngCore> NormalSampler<R> {
    pub fn new(rng: R) -> Self {
        NormalSampler { rng, spare: None }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let scale = 1.0 / (1u64 << 53) as f64;
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * scale;
        let u2 = (self.rng.next_u64() >> 11) as f64 * scale;
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn rng_mut(&mut self) -> &mut R {
        &mut self.rng
    }
}

/// Uniform integer in `0..n` by rejection (no modulo bias).
pub fn uniform_below<R: RngCore>(rng: &mut R, n: u64) -> u64 {
    assert!(n > 0);
    let zone = u64::MAX - (u64::MAX % n);
    loop {
        let v = rng.next_u64();
        if v < zone {
            return v % n;
        }
    }
}

/// `k` distinct indices from `0..n`, sorted (partial Fisher–Yates).
pub fn sample_indices<R: RngCore>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    assert!(k <= n);
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + uniform_below(rng, (n - i) as u64) as usize;
        pool.swap(i, j);
    }
    let mut out = pool[..k].to_vec();
    out.sort_unstable();
    out
}
