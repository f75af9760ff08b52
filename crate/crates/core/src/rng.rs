//! Portable seeded randomness.
//!
//! Every random choice in the crate goes through ChaCha8 keyed by the user's
//! seed: the 64-bit seed is written little-endian into the first 8 bytes of
//! the 32-byte key, the rest is zero. Independent streams (for example one per
//! synthetic utterance) use ChaCha's stream id. Integers in `[0, n)` come from
//! rejection sampling on `next_u64`, and shuffles are Fisher–Yates from the
//! back, so selections can be replayed by any ChaCha8 implementation.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub fn seeded_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = seeded(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform integer in `[0, n)`. `n` must be non-zero.
pub fn below<R: RngCore>(rng: &mut R, n: u64) -> u64 {
    assert!(n > 0, "empty range");
    let zone = u64::MAX - (u64::MAX - n + 1) % n;
    loop {
        let v = rng.next_u64();
        if v <= zone {
            return v % n;
        }
    }
}

/// Uniform float in `[0, 1)` with 53 bits of precision.
pub fn unit<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn bernoulli<R: RngCore>(rng: &mut R, p: f64) -> bool {
    unit(rng) < p
}

/// Uniform float in `[lo, hi)`.
pub fn uniform<R: RngCore>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * unit(rng)
}

pub fn shuffle<R: RngCore, T>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = below(rng, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// `k` distinct indices from `0..n`, in selection order.
pub fn sample_indices<R: RngCore>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    assert!(k <= n);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + below(rng, (n - i) as u64) as usize;
        idx.swap(i, j);
    }
    idx.truncate(k);
    idx
}
