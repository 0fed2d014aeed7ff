//! Deterministic RNG streams derived from one master seed.
//!
//! Every consumer of randomness (parent edges, the two edge subsamples, the
//! relabeling permutation, vertex subsampling, seed selection, repetitions)
//! owns its own stream, so changing one knob never perturbs the draws of
//! another, and parallel workers can re-derive their streams from indices
//! instead of sharing a generator.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tags for the generator's substreams.
pub mod tag {
    pub const PARENT: u64 = 1;
    pub const SAMPLE_G1: u64 = 2;
    pub const SAMPLE_G2: u64 = 3;
    pub const PERMUTATION: u64 = 4;
    pub const VERTEX_KEEP_G1: u64 = 5;
    pub const VERTEX_KEEP_G2: u64 = 6;
    pub const SEEDS: u64 = 7;
    pub const REPETITION: u64 = 8;
}

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A point in the stream tree. `child(tag)` derives an independent subtree;
/// `rng()` instantiates the stream itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey {
    bits: u64,
}

impl StreamKey {
    pub fn new(master_seed: u64) -> Self {
        let mut s = master_seed ^ 0x51_7c_c1_b7_27_22_0a_95;
        StreamKey { bits: splitmix64(&mut s) }
    }

    pub fn child(&self, tag: u64) -> Self {
        let mut s = self.bits ^ tag.wrapping_mul(0xff51_afd7_ed55_8ccd);
        StreamKey { bits: splitmix64(&mut s) }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut state = self.bits;
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}
