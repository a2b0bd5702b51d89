//! Fixtures and exhaustive oracles for unit tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::RelevanceMatrix;

/// Five candidates, three slots: C1-S1, C2-S2, C3-S1, C3-S2, C4-S3, C5 isolated.
pub(crate) fn small_instance() -> RelevanceMatrix {
    RelevanceMatrix::from_edges(5, 3, [(0, 0), (1, 1), (2, 0), (2, 1), (3, 2)]).unwrap()
}

pub(crate) fn random_matrix(c: usize, s: usize, density: f64, seed: u64) -> RelevanceMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..c {
        for t in 0..s {
            if rng.random_bool(density) {
                edges.push((a, t));
            }
        }
    }
    RelevanceMatrix::from_edges(c, s, edges).unwrap()
}

pub(crate) fn shuffled(n: usize, seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5));
    v
}

/// Largest injective assignment of pool members to adjacent slots, by
/// trying every choice for every candidate.
pub(crate) fn brute_force_mbm(m: &RelevanceMatrix, pool: &[usize]) -> usize {
    fn go(m: &RelevanceMatrix, pool: &[usize], used: &mut Vec<bool>) -> usize {
        let Some((&a, rest)) = pool.split_first() else {
            return 0;
        };
        let mut best = go(m, rest, used);
        for &s in m.neighbors(a) {
            let s = s as usize;
            if !used[s] {
                used[s] = true;
                best = best.max(1 + go(m, rest, used));
                used[s] = false;
            }
        }
        best
    }
    go(m, pool, &mut vec![false; m.slots()])
}
