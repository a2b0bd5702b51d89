use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::RelevanceMatrix;

const UNMATCHED: u32 = u32::MAX;
const UNREACHABLE: u32 = u32::MAX;

/// A maximum matching between a growing candidate pool and the slots of
/// one relevance matrix.
///
/// Besides the matching itself the state keeps, for every slot, the length
/// of the shortest alternating path from that slot to an unmatched slot
/// (`UNREACHABLE` if none). A candidate outside the pool can grow the
/// matching iff it is adjacent to a slot with a finite distance, which makes
/// the gain query a scan of the candidate's adjacency list. The distances
/// only change when the matching changes, so they are rebuilt after each
/// augmentation by a breadth-first search starting at the unmatched slots.
#[derive(Debug, Clone)]
pub struct MatchState<'m> {
    matrix: &'m RelevanceMatrix,
    in_pool: Vec<bool>,
    pool_len: usize,
    candidate_match: Vec<u32>,
    slot_match: Vec<u32>,
    size: usize,
    dist: Vec<u32>,
    /// For each slot, the matched candidates adjacent to it.
    watchers: Vec<Vec<u32>>,
}

impl<'m> MatchState<'m> {
    /// Empty pool, empty matching.
    pub fn new(matrix: &'m RelevanceMatrix) -> Self {
        Self {
            matrix,
            in_pool: vec![false; matrix.candidates()],
            pool_len: 0,
            candidate_match: vec![UNMATCHED; matrix.candidates()],
            slot_match: vec![UNMATCHED; matrix.slots()],
            size: 0,
            dist: vec![0; matrix.slots()],
            watchers: vec![Vec::new(); matrix.slots()],
        }
    }

    pub fn matrix(&self) -> &'m RelevanceMatrix {
        self.matrix
    }

    /// Current matching size, equal to the maximum matching size of the pool.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pool_len(&self) -> usize {
        self.pool_len
    }

    pub fn contains(&self, a: usize) -> bool {
        self.in_pool[a]
    }

    /// True once every slot is matched; no candidate can add anything.
    pub fn is_saturated(&self) -> bool {
        self.size == self.matrix.slots()
    }

    pub fn matched_slot(&self, a: usize) -> Option<usize> {
        match self.candidate_match[a] {
            UNMATCHED => None,
            s => Some(s as usize),
        }
    }

    pub fn matched_candidate(&self, s: usize) -> Option<usize> {
        match self.slot_match[s] {
            UNMATCHED => None,
            a => Some(a as usize),
        }
    }

    pub fn unmatched_slots(&self) -> impl Iterator<Item = usize> + '_ {
        self.slot_match
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a == UNMATCHED)
            .map(|(s, _)| s)
    }

    fn check_new(&self, a: usize) -> Result<()> {
        if a >= self.in_pool.len() {
            return Err(Error::input(format!(
                "candidate {a} out of range for {} candidates",
                self.in_pool.len()
            )));
        }
        if self.in_pool[a] {
            return Err(Error::Contract(format!("candidate {a} is already in the pool")));
        }
        Ok(())
    }

    /// Whether an augmenting path starts at `a`. `a` must be outside the pool.
    #[inline]
    pub(crate) fn augments(&self, a: usize) -> bool {
        !self.is_saturated()
            && self
                .matrix
                .neighbors(a)
                .iter()
                .any(|&s| self.dist[s as usize] != UNREACHABLE)
    }

    /// Increase of the matching size if `a` joined the pool: 0 or 1.
    pub fn gain_if_added(&self, a: usize) -> Result<u32> {
        self.check_new(a)?;
        Ok(self.augments(a) as u32)
    }

    /// Adds `a` to the pool and applies the shortest augmenting path from
    /// it, if any. Among shortest paths the one visiting the smallest slot
    /// indices first is used. Returns the gain (0 or 1).
    pub fn commit_add(&mut self, a: usize) -> Result<u32> {
        self.check_new(a)?;
        Ok(self.commit_unchecked(a))
    }

    pub(crate) fn commit_unchecked(&mut self, a: usize) -> u32 {
        debug_assert!(!self.in_pool[a]);
        self.in_pool[a] = true;
        self.pool_len += 1;
        let Some(mut slot) = self.closest_slot(a) else {
            return 0;
        };
        let mut candidate = a;
        loop {
            let previous = self.slot_match[slot];
            self.slot_match[slot] = candidate as u32;
            self.candidate_match[candidate] = slot as u32;
            if previous == UNMATCHED {
                break;
            }
            candidate = previous as usize;
            let want = self.dist[slot] - 1;
            slot = self
                .matrix
                .neighbors(candidate)
                .iter()
                .map(|&s| s as usize)
                .find(|&s| self.dist[s] == want)
                .expect("alternating distances are consistent");
        }
        for &s in self.matrix.neighbors(a) {
            self.watchers[s as usize].push(a as u32);
        }
        self.size += 1;
        self.rebuild_distances();
        1
    }

    fn closest_slot(&self, a: usize) -> Option<usize> {
        if self.is_saturated() {
            return None;
        }
        self.matrix
            .neighbors(a)
            .iter()
            .map(|&s| s as usize)
            .filter(|&s| self.dist[s] != UNREACHABLE)
            .min_by_key(|&s| (self.dist[s], s))
    }

    fn rebuild_distances(&mut self) {
        self.dist.fill(UNREACHABLE);
        let mut queue = VecDeque::new();
        for (s, &a) in self.slot_match.iter().enumerate() {
            if a == UNMATCHED {
                self.dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            let next = self.dist[s] + 1;
            for &b in &self.watchers[s] {
                let t = self.candidate_match[b as usize] as usize;
                if self.dist[t] == UNREACHABLE {
                    self.dist[t] = next;
                    queue.push_back(t);
                }
            }
        }
    }

    /// The members of `frontier` that would grow the matching, found with
    /// the slot-side distances in one pass. No member may be in the pool.
    pub fn slot_side_scan(&self, frontier: &[usize]) -> Result<Vec<usize>> {
        for &a in frontier {
            self.check_new(a)?;
        }
        Ok(frontier.iter().copied().filter(|&a| self.augments(a)).collect())
    }

    /// Verifies the matching is consistent with the pool and the matrix.
    /// Maximality is checked by callers against a fresh matching.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        let mut pairs = 0;
        for (a, &s) in self.candidate_match.iter().enumerate() {
            if s == UNMATCHED {
                continue;
            }
            pairs += 1;
            if self.slot_match[s as usize] != a as u32 {
                return fail(format!("candidate {a} -> slot {s} is one-sided"));
            }
            if !self.in_pool[a] {
                return fail(format!("matched candidate {a} outside the pool"));
            }
            if !self.matrix.has_edge(a, s as usize) {
                return fail(format!("matched pair ({a}, {s}) is not an edge"));
            }
        }
        let slot_pairs = self.slot_match.iter().filter(|&&a| a != UNMATCHED).count();
        if pairs != self.size || slot_pairs != self.size {
            return fail(format!(
                "size {} but {pairs} candidate-side and {slot_pairs} slot-side pairs",
                self.size
            ));
        }
        if self.in_pool.iter().filter(|&&p| p).count() != self.pool_len {
            return fail("pool length out of sync".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::mbm;
    use crate::testing::{small_instance, random_matrix, shuffled};

    #[test]
    fn new_state_is_empty() {
        let m = small_instance();
        let state = MatchState::new(&m);
        assert_eq!(state.size(), 0);
        assert_eq!(state.unmatched_slots().collect::<Vec<_>>(), [0, 1, 2]);
        assert!((0..5).all(|a| state.matched_slot(a).is_none()));
        assert_eq!(state.pool_len(), 0);
    }

    #[test]
    fn small_instance_commit_sequence() {
        let m = small_instance();
        let mut state = MatchState::new(&m);
        let sizes: Vec<usize> = (0..5)
            .map(|a| {
                state.commit_add(a).unwrap();
                state.check_invariants().unwrap();
                state.size()
            })
            .collect();
        assert_eq!(sizes, [1, 2, 2, 3, 3]);
    }

    #[test]
    fn isolated_candidate_gains_nothing() {
        let m = small_instance();
        let mut state = MatchState::new(&m);
        assert_eq!(state.gain_if_added(4).unwrap(), 0);
        assert_eq!(state.commit_add(4).unwrap(), 0);
        assert_eq!(state.size(), 0);
        assert!(state.contains(4));
        assert_eq!(state.gain_if_added(0).unwrap(), 1);
    }

    #[test]
    fn augmenting_path_reassigns() {
        // C3 (idx 2) first takes S1; C1 (idx 0) only fits S1, so C3 must move.
        let m = small_instance();
        let mut state = MatchState::new(&m);
        state.commit_add(2).unwrap();
        assert_eq!(state.matched_slot(2), Some(0));
        assert_eq!(state.commit_add(0).unwrap(), 1);
        assert_eq!(state.matched_slot(0), Some(0));
        assert_eq!(state.matched_slot(2), Some(1));
        assert_eq!(state.gain_if_added(1).unwrap(), 0);
        state.check_invariants().unwrap();
    }

    #[test]
    fn adding_twice_is_a_contract_error() {
        let m = small_instance();
        let mut state = MatchState::new(&m);
        state.commit_add(1).unwrap();
        assert!(matches!(state.gain_if_added(1), Err(Error::Contract(_))));
        assert!(matches!(state.commit_add(1), Err(Error::Contract(_))));
        assert!(matches!(state.slot_side_scan(&[0, 1]), Err(Error::Contract(_))));
    }

    #[test]
    fn saturated_state_scans_empty() {
        let m = small_instance();
        let mut state = MatchState::new(&m);
        for a in [0, 1, 3] {
            state.commit_add(a).unwrap();
        }
        assert!(state.is_saturated());
        assert!(state.slot_side_scan(&[2, 4]).unwrap().is_empty());
    }

    #[test]
    fn empty_state_scan_returns_connected_candidates() {
        let m = small_instance();
        let state = MatchState::new(&m);
        assert_eq!(state.slot_side_scan(&[0, 1, 2, 3, 4]).unwrap(), [0, 1, 2, 3]);
    }

    #[test]
    fn gain_matches_fresh_matching() {
        for seed in 0..200u64 {
            let m = random_matrix(9, 5, [0.15, 0.3, 0.5][seed as usize % 3], seed);
            let order = shuffled(9, seed);
            let (pool, rest) = order.split_at(seed as usize % 9);
            let mut state = MatchState::new(&m);
            for &a in pool {
                state.commit_add(a).unwrap();
            }
            let a = rest[0];
            let base = mbm(&m, pool).unwrap();
            let mut grown = pool.to_vec();
            grown.push(a);
            let expected = (mbm(&m, &grown).unwrap() - base) as u32;
            assert_eq!(state.gain_if_added(a).unwrap(), expected, "seed {seed}");
            let scan = state.slot_side_scan(rest).unwrap();
            for &b in rest {
                let mut with_b = pool.to_vec();
                with_b.push(b);
                let augments = mbm(&m, &with_b).unwrap() > base;
                assert_eq!(scan.contains(&b), augments, "seed {seed} candidate {b}");
            }
        }
    }

    #[test]
    fn incremental_size_tracks_fresh_matching() {
        for seed in 0..100u64 {
            let m = random_matrix(10, 6, [0.1, 0.3, 0.6][seed as usize % 3], seed);
            let order = shuffled(10, seed + 1000);
            let mut state = MatchState::new(&m);
            for (k, &a) in order.iter().enumerate() {
                state.commit_add(a).unwrap();
                state.check_invariants().unwrap();
                assert_eq!(state.size(), mbm(&m, &order[..=k]).unwrap(), "seed {seed}");
            }
        }
    }
}
