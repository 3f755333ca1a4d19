//! Seed derivation and the crate-wide PRNG.
//!
//! All randomness comes from [`ChaCha8Rng`], a counter-based generator whose
//! output is specified independently of platform and word size. A single
//! 64-bit seed feeds several independent ChaCha streams so that, e.g., the
//! dataset sampler and the learner never share a keystream even when they are
//! handed the same seed.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64-style mixing of a base seed and a counter.
///
/// `z = a + (b + 1) * 0x9E3779B97F4A7C15` (wrapping), followed by the two
/// xor-shift-multiply rounds and the final xor-shift of SplitMix64.
pub fn mix64(a: u64, b: u64) -> u64 {
    let mut z = a.wrapping_add(b.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Consumers of randomness; each gets its own ChaCha stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Data = 0,
    Learner = 1,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}
