//! Keyed random streams.
//!
//! A stream is identified by a root seed plus a path of integers such as
//! `(experiment, cell, replicate)`. The path is hashed with SplitMix64 into a
//! 256-bit ChaCha8 key, so the numbers a task sees depend only on its key and
//! never on which worker ran it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Fixed seed used whenever the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5EED_1957_0000_0001;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG for the stream `seed / path[0] / path[1] / ...`.
pub fn stream(seed: u64, path: &[u64]) -> StreamRng {
    let mut state = seed;
    let mut acc = splitmix64(&mut state);
    for &p in path {
        let mut s = acc ^ p.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        acc = splitmix64(&mut s) ^ splitmix64(&mut state);
    }
    let mut key = [0u8; 32];
    let mut s = acc;
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut s).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Stable 64-bit tag for a name, used as a path component.
pub fn tag(name: &str) -> u64 {
    // FNV-1a
    name.bytes().fold(0xCBF2_9CE4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}
