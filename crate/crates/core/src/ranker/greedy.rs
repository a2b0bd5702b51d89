//! Greedy maximization of the Monte-Carlo matching objective, with and
//! without lazy evaluation of marginal gains.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matching::MatchState;
use crate::model::{Ranking, SampleSet};
use crate::ranker::baselines::tiebreak_scores;

/// Work counters of one greedy run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GreedyStats {
    /// Number of (candidate, round) marginal-gain computations, each over
    /// all samples.
    pub gain_evaluations: u64,
    pub rounds: usize,
}

/// Sum over samples of the matching-size increase from adding `a`.
///
/// All states must track the same pool, which must not contain `a`.
pub fn total_marginal_gain(states: &[MatchState<'_>], a: usize) -> Result<u64> {
    let Some(first) = states.first() else {
        return Ok(0);
    };
    if states.iter().any(|s| s.pool_len() != first.pool_len()) {
        return Err(Error::Invariant("match states track different pools".into()));
    }
    states
        .iter()
        .map(|s| s.gain_if_added(a).map(u64::from))
        .sum()
}

fn gain_unchecked(states: &[MatchState<'_>], a: usize) -> u64 {
    states.iter().filter(|s| s.augments(a)).count() as u64
}

/// Ordering key of a candidate within a round: larger gain first, then
/// larger competition-normalized relevance, then smaller index.
#[derive(Debug, Clone, Copy)]
struct Key {
    gain: u64,
    tiebreak: f64,
    candidate: usize,
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .cmp(&other.gain)
            .then(self.tiebreak.total_cmp(&other.tiebreak))
            .then(other.candidate.cmp(&self.candidate))
    }
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Priority-queue entry holding a possibly outdated gain. By
/// submodularity the stored gain bounds the current one from above.
#[derive(Debug, Clone, Copy)]
pub struct LazyQueueEntry {
    pub candidate: usize,
    pub stale_gain: u64,
    pub round_evaluated: usize,
    tiebreak: f64,
}

impl LazyQueueEntry {
    fn key(&self) -> Key {
        Key {
            gain: self.stale_gain,
            tiebreak: self.tiebreak,
            candidate: self.candidate,
        }
    }
}

impl Ord for LazyQueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialEq for LazyQueueEntry {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for LazyQueueEntry {}

impl PartialOrd for LazyQueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Greedy<'s> {
    states: Vec<MatchState<'s>>,
    tiebreak: Vec<f64>,
    order: Vec<usize>,
    prefix_gain: Vec<u64>,
    total: u64,
    stats: GreedyStats,
}

impl<'s> Greedy<'s> {
    fn new(samples: &'s SampleSet) -> Self {
        let c = samples.candidates();
        Self {
            states: samples.samples().iter().map(MatchState::new).collect(),
            tiebreak: tiebreak_scores(samples),
            order: Vec::with_capacity(c),
            prefix_gain: Vec::with_capacity(c),
            total: 0,
            stats: GreedyStats::default(),
        }
    }

    fn gain(&mut self, a: usize) -> u64 {
        self.stats.gain_evaluations += 1;
        gain_unchecked(&self.states, a)
    }

    fn commit(&mut self, a: usize) {
        let gain: u64 = self
            .states
            .par_iter_mut()
            .map(|s| u64::from(s.commit_unchecked(a)))
            .sum();
        self.total += gain;
        self.order.push(a);
        self.prefix_gain.push(self.total);
        self.stats.rounds += 1;
    }

    fn finish(self) -> (Ranking, GreedyStats) {
        let ranking = Ranking {
            order: self.order,
            prefix_gain: Some(self.prefix_gain),
        };
        (ranking, self.stats)
    }
}

fn target_len(samples: &SampleSet, stop_at: Option<usize>) -> Result<usize> {
    let c = samples.candidates();
    match stop_at {
        None => Ok(c),
        Some(k) if (1..=c).contains(&k) => Ok(k),
        Some(k) => Err(Error::input(format!("stop_at {k} outside [1, {c}]"))),
    }
}

/// Plain greedy: every round evaluates every remaining candidate.
pub fn naive_greedy(samples: &SampleSet, stop_at: Option<usize>) -> Result<(Ranking, GreedyStats)> {
    let len = target_len(samples, stop_at)?;
    let mut greedy = Greedy::new(samples);
    let mut remaining: Vec<usize> = (0..samples.candidates()).collect();
    for _ in 0..len {
        let states = &greedy.states;
        let tiebreak = &greedy.tiebreak;
        let (pos, _) = remaining
            .par_iter()
            .enumerate()
            .map(|(pos, &a)| {
                let key = Key {
                    gain: gain_unchecked(states, a),
                    tiebreak: tiebreak[a],
                    candidate: a,
                };
                (pos, key)
            })
            .max_by_key(|&(_, key)| key)
            .expect("remaining candidates");
        greedy.stats.gain_evaluations += remaining.len() as u64;
        let winner = remaining.swap_remove(pos);
        greedy.commit(winner);
    }
    Ok(greedy.finish())
}

/// Lazy greedy: stale gains in a max-heap are upper bounds, so only the
/// top entry ever needs recomputing. Selects exactly what `naive_greedy`
/// selects.
pub fn lazy_greedy(samples: &SampleSet, stop_at: Option<usize>) -> Result<(Ranking, GreedyStats)> {
    let len = target_len(samples, stop_at)?;
    let mut greedy = Greedy::new(samples);
    let initial: Vec<LazyQueueEntry> = (0..samples.candidates())
        .into_par_iter()
        .map(|a| LazyQueueEntry {
            candidate: a,
            stale_gain: gain_unchecked(&greedy.states, a),
            round_evaluated: 0,
            tiebreak: greedy.tiebreak[a],
        })
        .collect();
    greedy.stats.gain_evaluations += initial.len() as u64;
    let mut heap = BinaryHeap::from(initial);
    for round in 0..len {
        loop {
            let mut top = heap.pop().expect("remaining candidates");
            // A zero bound is exact: gains never go below zero.
            if top.round_evaluated == round || top.stale_gain == 0 {
                greedy.commit(top.candidate);
                break;
            }
            top.stale_gain = greedy.gain(top.candidate);
            top.round_evaluated = round;
            heap.push(top);
        }
    }
    Ok(greedy.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::mbm;
    use crate::model::RelevanceMatrix;
    use crate::testing::random_matrix;

    fn random_samples(c: usize, s: usize, n: usize, seed: u64) -> SampleSet {
        let density = [0.1, 0.3, 0.6][seed as usize % 3];
        let samples = (0..n as u64)
            .map(|i| random_matrix(c, s, density, seed * 1000 + i))
            .collect();
        SampleSet::from_samples(samples, seed).unwrap()
    }

    #[test]
    fn identity_sample_fills_one_slot_per_pick() {
        let m = RelevanceMatrix::from_edges(6, 4, (0..4).map(|i| (i, i))).unwrap();
        let set = SampleSet::from_samples(vec![m], 0).unwrap();
        let (ranking, _) = naive_greedy(&set, None).unwrap();
        assert_eq!(ranking.prefix_gain.unwrap(), [1, 2, 3, 4, 4, 4]);
        assert_eq!(&ranking.order[..4], &[0, 1, 2, 3]);
    }

    #[test]
    fn total_gain_counts_augmenting_samples() {
        let m = RelevanceMatrix::from_edges(2, 1, [(0, 0)]).unwrap();
        let set = SampleSet::from_samples(vec![m; 5], 0).unwrap();
        let states: Vec<_> = set.samples().iter().map(MatchState::new).collect();
        assert_eq!(total_marginal_gain(&states, 0).unwrap(), 5);
        assert_eq!(total_marginal_gain(&states, 1).unwrap(), 0);
    }

    #[test]
    fn total_gain_rejects_diverging_pools() {
        let m = RelevanceMatrix::from_edges(3, 1, [(0, 0)]).unwrap();
        let mut states = vec![MatchState::new(&m), MatchState::new(&m)];
        states[0].commit_add(1).unwrap();
        assert!(matches!(
            total_marginal_gain(&states, 0),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn total_gain_matches_fresh_difference() {
        for seed in 0..60 {
            let set = random_samples(8, 4, 4, seed);
            let mut states: Vec<_> = set.samples().iter().map(MatchState::new).collect();
            let pool: Vec<usize> = (0..(seed as usize % 6)).collect();
            for &a in &pool {
                for s in &mut states {
                    s.commit_add(a).unwrap();
                }
            }
            for a in pool.len()..8 {
                let mut grown = pool.clone();
                grown.push(a);
                let expected: usize = set
                    .samples()
                    .iter()
                    .map(|r| mbm(r, &grown).unwrap() - mbm(r, &pool).unwrap())
                    .sum();
                assert_eq!(total_marginal_gain(&states, a).unwrap(), expected as u64);
            }
        }
    }

    #[test]
    fn lazy_matches_naive() {
        for seed in 0..100 {
            let set = random_samples(10, 4, 5, seed);
            let (naive, naive_stats) = naive_greedy(&set, None).unwrap();
            let (lazy, lazy_stats) = lazy_greedy(&set, None).unwrap();
            assert_eq!(naive.prefix_gain, lazy.prefix_gain, "seed {seed}");
            assert_eq!(naive.order, lazy.order, "seed {seed}");
            assert!(lazy_stats.gain_evaluations <= naive_stats.gain_evaluations);
        }
    }

    #[test]
    fn increments_never_grow() {
        for seed in 0..50 {
            let set = random_samples(12, 5, 6, seed);
            let (ranking, _) = lazy_greedy(&set, None).unwrap();
            let gains = ranking.prefix_gain.unwrap();
            let mut prev = u64::MAX;
            let mut last = 0;
            for g in gains {
                assert!(g - last <= prev, "seed {seed}");
                prev = g - last;
                last = g;
            }
        }
    }

    #[test]
    fn stop_at_truncates_and_validates() {
        let set = random_samples(10, 3, 2, 4);
        let (ranking, stats) = lazy_greedy(&set, Some(3)).unwrap();
        assert_eq!(ranking.len(), 3);
        assert_eq!(stats.rounds, 3);
        assert!(lazy_greedy(&set, Some(0)).is_err());
        assert!(naive_greedy(&set, Some(11)).is_err());
    }
}
