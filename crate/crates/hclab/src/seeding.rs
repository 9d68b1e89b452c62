//! Deterministic stream splitting from one master seed.
//!
//! Every stochastic routine takes `(master_seed, label, index)` and gets an
//! independent ChaCha20 stream. The split is pinned so that results are
//! byte-identical across runs and across thread counts:
//!
//! 1. `h = fnv1a64(label)` over the label's UTF-8 bytes;
//! 2. `state = master ^ h ^ (index * 0x9E3779B97F4A7C15)` (wrapping);
//! 3. the 32-byte ChaCha20 key is four successive splitmix64 outputs of `state`.
//!
//! Changing any of master, label or index changes the whole key.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(master: u64, label: &str, index: u64) -> ChaCha20Rng {
    let mut state = master ^ fnv1a64(label.as_bytes()) ^ index.wrapping_mul(GOLDEN);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha20Rng::from_seed(seed)
}
