use crate::error::{Error, Result};

/// Binary candidate-by-slot relevance matrix, stored as per-candidate
/// adjacency lists sorted by slot index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelevanceMatrix {
    candidates: usize,
    slots: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl RelevanceMatrix {
    /// Builds a matrix from `(candidate, slot)` pairs in any order.
    /// Duplicate pairs collapse into one edge.
    pub fn from_edges<I>(candidates: usize, slots: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if slots > u32::MAX as usize {
            return Err(Error::input("too many slots"));
        }
        let mut rows = vec![Vec::new(); candidates];
        for (a, s) in edges {
            if a >= candidates || s >= slots {
                return Err(Error::input(format!(
                    "edge ({a}, {s}) outside {candidates}x{slots} matrix"
                )));
            }
            rows[a].push(s as u32);
        }
        let mut builder = RowBuilder::new(candidates, slots);
        for mut row in rows {
            row.sort_unstable();
            row.dedup();
            builder.push_sorted_row(&row);
        }
        Ok(builder.finish())
    }

    /// Matrix with no edges.
    pub fn empty(candidates: usize, slots: usize) -> Self {
        Self {
            candidates,
            slots,
            offsets: vec![0; candidates + 1],
            targets: Vec::new(),
        }
    }

    pub fn candidates(&self) -> usize {
        self.candidates
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// Slots candidate `a` is relevant for, ascending.
    #[inline]
    pub fn neighbors(&self, a: usize) -> &[u32] {
        &self.targets[self.offsets[a]..self.offsets[a + 1]]
    }

    pub fn degree(&self, a: usize) -> usize {
        self.offsets[a + 1] - self.offsets[a]
    }

    pub fn has_edge(&self, a: usize, s: usize) -> bool {
        self.neighbors(a).binary_search(&(s as u32)).is_ok()
    }

    /// All edges in candidate-major, slot-ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.candidates)
            .flat_map(move |a| self.neighbors(a).iter().map(move |&s| (a, s as usize)))
    }

    pub(crate) fn check_pool(&self, pool: &[usize]) -> Result<()> {
        match pool.iter().find(|&&a| a >= self.candidates) {
            Some(a) => Err(Error::input(format!(
                "candidate {a} out of range for {} candidates",
                self.candidates
            ))),
            None => Ok(()),
        }
    }
}

/// Appends candidate rows in order. Used by the samplers, which emit each
/// row already sorted.
#[derive(Debug)]
pub(crate) struct RowBuilder {
    candidates: usize,
    slots: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl RowBuilder {
    pub(crate) fn new(candidates: usize, slots: usize) -> Self {
        let mut offsets = Vec::with_capacity(candidates + 1);
        offsets.push(0);
        Self {
            candidates,
            slots,
            offsets,
            targets: Vec::new(),
        }
    }

    pub(crate) fn push_slot(&mut self, s: u32) {
        debug_assert!((s as usize) < self.slots);
        debug_assert!(self
            .targets
            .get(*self.offsets.last().unwrap()..)
            .and_then(|row| row.last())
            .is_none_or(|&prev| prev < s));
        self.targets.push(s);
    }

    pub(crate) fn end_row(&mut self) {
        self.offsets.push(self.targets.len());
    }

    pub(crate) fn push_sorted_row(&mut self, row: &[u32]) {
        for &s in row {
            self.push_slot(s);
        }
        self.end_row();
    }

    pub(crate) fn finish(mut self) -> RelevanceMatrix {
        debug_assert_eq!(self.offsets.len(), self.candidates + 1);
        self.targets.shrink_to_fit();
        RelevanceMatrix {
            candidates: self.candidates,
            slots: self.slots,
            offsets: self.offsets,
            targets: self.targets,
        }
    }
}
