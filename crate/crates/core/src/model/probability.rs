use rand::Rng;
use serde::{Deserialize, Serialize};

use super::layout::SlotLayout;
use super::relevance::{RelevanceMatrix, RowBuilder};
use crate::error::{Error, Result};

/// Sparse candidate-by-slot matrix of marginal relevance probabilities.
/// Zero entries are structurally absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MarginalsRepr", into = "MarginalsRepr")]
pub struct SparseMarginals {
    candidates: usize,
    slots: usize,
    offsets: Vec<usize>,
    entries: Vec<(u32, f64)>,
}

#[derive(Serialize, Deserialize)]
struct MarginalsRepr {
    candidates: usize,
    slots: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseMarginals {
    /// Builds from `(candidate, slot, probability)` triplets. Zero
    /// probabilities are dropped; a repeated pair is an error.
    pub fn from_triplets<I>(candidates: usize, slots: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); candidates];
        for (a, s, p) in triplets {
            if a >= candidates || s >= slots {
                return Err(Error::input(format!(
                    "entry ({a}, {s}) outside {candidates}x{slots} matrix"
                )));
            }
            check_probability(p)?;
            if p > 0.0 {
                rows[a].push((s as u32, p));
            }
        }
        let mut offsets = Vec::with_capacity(candidates + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for (a, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable_by_key(|&(s, _)| s);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::input(format!("duplicate entry ({a}, {})", w[0].0)));
            }
            entries.extend(row);
            offsets.push(entries.len());
        }
        Ok(Self {
            candidates,
            slots,
            offsets,
            entries,
        })
    }

    pub(crate) fn from_rows(slots: usize, rows: impl IntoIterator<Item = Vec<(u32, f64)>>) -> Self {
        let mut offsets = vec![0];
        let mut entries = Vec::new();
        for row in rows {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
            entries.extend(row.into_iter().filter(|&(_, p)| p > 0.0));
            offsets.push(entries.len());
        }
        Self {
            candidates: offsets.len() - 1,
            slots,
            offsets,
            entries,
        }
    }

    pub fn candidates(&self) -> usize {
        self.candidates
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Nonzero `(slot, probability)` entries of candidate `a`, ascending by slot.
    pub fn row(&self, a: usize) -> &[(u32, f64)] {
        &self.entries[self.offsets[a]..self.offsets[a + 1]]
    }

    pub fn get(&self, a: usize, s: usize) -> f64 {
        let row = self.row(a);
        row.binary_search_by_key(&(s as u32), |&(slot, _)| slot)
            .map_or(0.0, |i| row[i].1)
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.candidates).flat_map(move |a| {
            self.row(a)
                .iter()
                .map(move |&(s, p)| (a, s as usize, p))
        })
    }

    /// Clamps every entry to at most `max`.
    pub fn clip_max(&mut self, max: f64) -> Result<()> {
        check_probability(max)?;
        let rows = (0..self.candidates)
            .map(|a| self.row(a).iter().map(|&(s, p)| (s, p.min(max))).collect())
            .collect::<Vec<_>>();
        *self = Self::from_rows(self.slots, rows);
        Ok(())
    }

    /// Sum of each slot's column.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.slots];
        for &(s, p) in &self.entries {
            sums[s as usize] += p;
        }
        sums
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> RelevanceMatrix {
        let mut builder = RowBuilder::new(self.candidates, self.slots);
        for a in 0..self.candidates {
            for &(s, p) in self.row(a) {
                if rng.random::<f64>() < p {
                    builder.push_slot(s);
                }
            }
            builder.end_row();
        }
        builder.finish()
    }
}

impl TryFrom<MarginalsRepr> for SparseMarginals {
    type Error = Error;

    fn try_from(repr: MarginalsRepr) -> Result<Self> {
        Self::from_triplets(repr.candidates, repr.slots, repr.entries)
    }
}

impl From<SparseMarginals> for MarginalsRepr {
    fn from(m: SparseMarginals) -> Self {
        MarginalsRepr {
            candidates: m.candidates,
            slots: m.slots,
            entries: m.triplets().collect(),
        }
    }
}

/// One group a candidate belongs to and the probability that the
/// candidate is relevant for all of that group's slots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub group: u32,
    pub prob: f64,
}

/// Relevance model where each candidate is relevant for either all or none
/// of the slots of each group it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GroupModelRepr", into = "GroupModelRepr")]
pub struct GroupModel {
    layout: SlotLayout,
    memberships: Vec<Vec<Membership>>,
}

#[derive(Serialize, Deserialize)]
struct GroupModelRepr {
    layout: SlotLayout,
    memberships: Vec<Vec<Membership>>,
}

impl GroupModel {
    /// `memberships[a]` lists the groups of candidate `a`. Groups must be
    /// distinct per candidate; they are stored in ascending order.
    pub fn new(layout: SlotLayout, mut memberships: Vec<Vec<Membership>>) -> Result<Self> {
        let groups = layout.group_count();
        for (a, row) in memberships.iter_mut().enumerate() {
            row.sort_by_key(|m| m.group);
            for m in row.iter() {
                if m.group as usize >= groups {
                    return Err(Error::input(format!(
                        "candidate {a}: group {} out of range for {groups} groups",
                        m.group
                    )));
                }
                check_probability(m.prob)?;
            }
            if row.windows(2).any(|w| w[0].group == w[1].group) {
                return Err(Error::input(format!("candidate {a}: repeated group")));
            }
        }
        Ok(Self {
            layout,
            memberships,
        })
    }

    pub fn layout(&self) -> &SlotLayout {
        &self.layout
    }

    pub fn candidates(&self) -> usize {
        self.memberships.len()
    }

    pub fn memberships(&self, a: usize) -> &[Membership] {
        &self.memberships[a]
    }

    /// Number of candidates in each group.
    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.layout.group_count()];
        for m in self.memberships.iter().flatten() {
            sizes[m.group as usize] += 1;
        }
        sizes
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> RelevanceMatrix {
        let mut builder = RowBuilder::new(self.candidates(), self.layout.total_slots());
        for row in &self.memberships {
            for m in row {
                if rng.random::<f64>() < m.prob {
                    for s in self.layout.slots(m.group as usize) {
                        builder.push_slot(s as u32);
                    }
                }
            }
            builder.end_row();
        }
        builder.finish()
    }

    fn marginals(&self) -> SparseMarginals {
        let rows = self.memberships.iter().map(|row| {
            row.iter()
                .flat_map(|m| {
                    self.layout
                        .slots(m.group as usize)
                        .map(move |s| (s as u32, m.prob))
                })
                .collect()
        });
        SparseMarginals::from_rows(self.layout.total_slots(), rows)
    }
}

impl TryFrom<GroupModelRepr> for GroupModel {
    type Error = Error;

    fn try_from(repr: GroupModelRepr) -> Result<Self> {
        Self::new(repr.layout, repr.memberships)
    }
}

impl From<GroupModel> for GroupModelRepr {
    fn from(m: GroupModel) -> Self {
        GroupModelRepr {
            layout: m.layout,
            memberships: m.memberships,
        }
    }
}

/// A sampleable distribution over relevance matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProbabilityModel {
    /// Every (candidate, slot) entry is an independent Bernoulli draw.
    Independent { marginals: SparseMarginals },
    /// Block-correlated relevance per (candidate, group).
    GroupStructured(GroupModel),
}

impl ProbabilityModel {
    pub fn candidates(&self) -> usize {
        match self {
            Self::Independent { marginals } => marginals.candidates(),
            Self::GroupStructured(m) => m.candidates(),
        }
    }

    pub fn slots(&self) -> usize {
        match self {
            Self::Independent { marginals } => marginals.slots(),
            Self::GroupStructured(m) => m.layout.total_slots(),
        }
    }

    /// Marginal probability of every (candidate, slot) entry.
    pub fn marginals(&self) -> SparseMarginals {
        match self {
            Self::Independent { marginals } => marginals.clone(),
            Self::GroupStructured(m) => m.marginals(),
        }
    }

    /// Draws one relevance matrix.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> RelevanceMatrix {
        match self {
            Self::Independent { marginals } => marginals.draw(rng),
            Self::GroupStructured(m) => m.draw(rng),
        }
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::input(format!("probability {p} outside [0, 1]")))
    }
}
