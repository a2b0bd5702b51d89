use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Partition of the slots into groups (labels, majors, strata).
///
/// Slots of group `j` occupy the contiguous index range `slots(j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SlotLayout {
    slots_per_group: Vec<usize>,
    group_start: Vec<usize>,
    slot_group: Vec<u32>,
}

impl SlotLayout {
    pub fn new(slots_per_group: Vec<usize>) -> Result<Self> {
        if slots_per_group.is_empty() {
            return Err(Error::input("slot layout needs at least one group"));
        }
        let mut group_start = Vec::with_capacity(slots_per_group.len() + 1);
        let mut slot_group = Vec::new();
        group_start.push(0);
        for (g, &count) in slots_per_group.iter().enumerate() {
            slot_group.extend(std::iter::repeat_n(g as u32, count));
            group_start.push(slot_group.len());
        }
        Ok(Self {
            slots_per_group,
            group_start,
            slot_group,
        })
    }

    /// `groups` groups of `slots` slots each.
    pub fn uniform(groups: usize, slots: usize) -> Result<Self> {
        Self::new(vec![slots; groups])
    }

    pub fn group_count(&self) -> usize {
        self.slots_per_group.len()
    }

    pub fn total_slots(&self) -> usize {
        self.slot_group.len()
    }

    pub fn slots_per_group(&self) -> &[usize] {
        &self.slots_per_group
    }

    pub fn slots(&self, group: usize) -> Range<usize> {
        self.group_start[group]..self.group_start[group + 1]
    }

    pub fn group_of(&self, slot: usize) -> usize {
        self.slot_group[slot] as usize
    }
}

impl TryFrom<Vec<usize>> for SlotLayout {
    type Error = Error;

    fn try_from(value: Vec<usize>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<SlotLayout> for Vec<usize> {
    fn from(layout: SlotLayout) -> Self {
        layout.slots_per_group
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_and_membership() {
        let layout = SlotLayout::new(vec![2, 0, 3]).unwrap();
        assert_eq!(layout.group_count(), 3);
        assert_eq!(layout.total_slots(), 5);
        assert_eq!(layout.slots(0), 0..2);
        assert_eq!(layout.slots(1), 2..2);
        assert_eq!(layout.slots(2), 2..5);
        let groups: Vec<_> = (0..5).map(|s| layout.group_of(s)).collect();
        assert_eq!(groups, [0, 0, 2, 2, 2]);
    }

    #[test]
    fn empty_layout_rejected() {
        assert!(SlotLayout::new(vec![]).is_err());
    }

    #[test]
    fn serializes_as_counts() {
        let layout = SlotLayout::uniform(2, 3).unwrap();
        let json = serde_json::to_string(&layout).unwrap();
        assert_eq!(json, "[3,3]");
        let back: SlotLayout = serde_json::from_str(&json).unwrap();
        assert_eq!(back, layout);
    }
}
