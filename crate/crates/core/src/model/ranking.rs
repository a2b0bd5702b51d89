use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordering of candidates, best first. May be a top-k prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranking {
    pub order: Vec<usize>,
    /// Entry `k` is the total matching size over all samples after the
    /// first `k + 1` candidates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix_gain: Option<Vec<u64>>,
}

impl Ranking {
    pub fn new(order: Vec<usize>) -> Self {
        Self {
            order,
            prefix_gain: None,
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Checks that the order lists distinct candidates below `candidates`
    /// and that `prefix_gain`, if present, is aligned and non-decreasing.
    pub fn validate(&self, candidates: usize) -> Result<()> {
        let mut seen = vec![false; candidates];
        for &a in &self.order {
            if a >= candidates {
                return Err(Error::input(format!(
                    "ranked candidate {a} out of range for {candidates} candidates"
                )));
            }
            if std::mem::replace(&mut seen[a], true) {
                return Err(Error::input(format!("candidate {a} ranked twice")));
            }
        }
        if let Some(gain) = &self.prefix_gain {
            if gain.len() != self.order.len() {
                return Err(Error::input("prefix_gain length differs from order length"));
            }
            if gain.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Invariant("prefix_gain decreases".into()));
            }
        }
        Ok(())
    }
}
