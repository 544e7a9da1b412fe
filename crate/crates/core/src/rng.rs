//! Seeded, splittable random streams.
//!
//! Every stochastic step draws from a ChaCha8 generator keyed by a root seed
//! and a path of integers, e.g. `(seed, [trial, PAIR])` for a SEM draw and
//! `(seed, [trial, SAMPLE_FIRST])` for the first dataset. Distinct paths give
//! statistically independent streams, and the same path always replays the
//! same stream regardless of how many other streams were used.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Path component for the SEM-pair draw of a trial.
pub const PAIR: u64 = 0;
/// Path component for sampling the first dataset of a trial.
pub const SAMPLE_FIRST: u64 = 1;
/// Path component for sampling the second dataset of a trial.
pub const SAMPLE_SECOND: u64 = 2;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for the stream identified by `seed` and `path`.
pub fn stream(seed: u64, path: &[u64]) -> Rng {
    let mut state = seed;
    let mut acc = splitmix64(&mut state);
    for &component in path {
        state ^= acc.rotate_left(17) ^ component.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        acc = splitmix64(&mut state);
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    Rng::from_seed(key)
}
