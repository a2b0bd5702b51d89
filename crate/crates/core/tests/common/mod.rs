//! Oracles and instance generators shared by the integration tests.
//! Nothing here goes through the incremental matching code.

#![allow(dead_code)]

use matchrank_core::{RelevanceMatrix, SampleSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<R: Rng>(rng: &mut R, c: usize, s: usize, density: f64) -> RelevanceMatrix {
    let edges: Vec<(usize, usize)> = (0..c)
        .flat_map(|a| (0..s).map(move |t| (a, t)))
        .filter(|_| rng.random_bool(density))
        .collect();
    RelevanceMatrix::from_edges(c, s, edges).unwrap()
}

pub fn random_samples<R: Rng>(rng: &mut R, c: usize, s: usize, n: usize, density: f64) -> SampleSet {
    let samples = (0..n).map(|_| random_matrix(rng, c, s, density)).collect();
    SampleSet::from_samples(samples, 0).unwrap()
}

pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// Maximum matching by trying every injective assignment.
pub fn brute_force_mbm(m: &RelevanceMatrix, pool: &[usize]) -> usize {
    fn go(m: &RelevanceMatrix, pool: &[usize], used: &mut [bool]) -> usize {
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

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
