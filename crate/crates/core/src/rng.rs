//! Seed derivation and stream-indexed generators.
//!
//! Every stochastic component draws from a ChaCha8 generator whose 256-bit
//! seed is expanded from `(master_seed, stream_index)` with the splitmix64
//! finalizer. Identical inputs produce identical streams on every platform,
//! and distinct stream indices decorrelate replicas without coordination.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer: a fast, well-mixed 64-bit permutation.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed for `stream` under `master`. Used to give each
/// replica (or each sweep arm) its own independent generator.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    mix64(master ^ mix64(stream.wrapping_add(GOLDEN_GAMMA)))
}

/// Builds the generator for `(master, stream)` by expanding the derived
/// seed into 256 bits with successive splitmix64 outputs.
pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut state = derive_seed(master, stream);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        state = state.wrapping_add(GOLDEN_GAMMA);
        chunk.copy_from_slice(&mix64(state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
