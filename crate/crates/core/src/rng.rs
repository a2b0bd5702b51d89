//! Seeded random sub-streams.
//!
//! Every random quantity in the crate comes from a ChaCha8 generator whose
//! 256-bit key is expanded from `(seed, purpose)` with SplitMix64 and whose
//! 64-bit stream id is the item index (sample number, draw number, ...).
//! Two streams with different `(purpose, index)` never overlap, and the
//! output for a given item does not depend on which thread produces it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for. The discriminant is mixed into the key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Purpose {
    /// Monte-Carlo relevance samples fed to a ranker.
    MonteCarlo = 1,
    /// Ground-truth relevance draws used for evaluation.
    GroundTruth = 2,
    /// Group memberships of synthetic candidates.
    Membership = 3,
    /// Gaussian offsets of synthetic group probabilities.
    Noise = 4,
    /// Random-permutation baseline.
    Shuffle = 5,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Returns the generator for item `index` of `purpose` under `seed`.
pub fn substream(seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    let mut state = seed ^ (purpose as u64).wrapping_mul(GOLDEN);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}
