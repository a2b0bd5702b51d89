//! Synthetic group-structured relevance models.
//!
//! Candidates belong to `memberships` of `groups` groups chosen uniformly
//! without replacement. Membership in group `j` (1-based) carries a
//! probability drawn from `Normal(p_base + group_slope * j, gaussian_std)`
//! and clipped to `clip_range`; a success makes the candidate relevant for
//! every slot of the group. The probability is drawn once per model and
//! shared by all relevance draws.

use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GroupModel, Membership, ProbabilityModel, SlotLayout};
use crate::rng::{substream, Purpose};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub groups: usize,
    pub slots_per_group: usize,
    pub candidates: usize,
    /// Groups per candidate.
    pub memberships: usize,
    pub p_base: f64,
    pub gaussian_std: f64,
    pub group_slope: f64,
    pub clip_range: (f64, f64),
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            groups: 10,
            slots_per_group: 50,
            candidates: 10_000,
            memberships: 2,
            p_base: 0.3,
            gaussian_std: 0.1,
            group_slope: 0.03,
            clip_range: (0.0001, 0.9999),
            seed: 0,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        if self.groups == 0 || self.slots_per_group == 0 || self.candidates == 0 {
            return Err(Error::input("groups, slots per group and candidates must be positive"));
        }
        if self.memberships == 0 {
            return Err(Error::input("each candidate needs at least one group"));
        }
        if self.memberships > self.groups {
            return Err(Error::input(format!(
                "memberships exceed groups ({} > {})",
                self.memberships, self.groups
            )));
        }
        if !(self.p_base > 0.0 && self.p_base < 1.0) {
            return Err(Error::input(format!("p_base {} outside (0, 1)", self.p_base)));
        }
        if !(self.gaussian_std >= 0.0 && self.gaussian_std.is_finite()) {
            return Err(Error::input("gaussian_std must be finite and non-negative"));
        }
        let (lo, hi) = self.clip_range;
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::input(format!("clip range ({lo}, {hi}) is not inside [0, 1]")));
        }
        Ok(())
    }
}

/// Random group memberships and standard-normal offsets of a synthetic
/// population. Models with different `p_base` built from the same
/// population differ only in the shift of the Gaussian mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticPopulation {
    params: SynthParams,
    /// Per candidate: (0-based group, standard-normal offset), by group.
    assignments: Vec<Vec<(u32, f64)>>,
}

impl SyntheticPopulation {
    pub fn new(params: SynthParams) -> Result<Self> {
        params.validate()?;
        let mut groups_rng = substream(params.seed, Purpose::Membership, 0);
        let mut noise_rng = substream(params.seed, Purpose::Noise, 0);
        let assignments = (0..params.candidates)
            .map(|_| {
                let mut groups: Vec<u32> =
                    index::sample(&mut groups_rng, params.groups, params.memberships)
                        .into_iter()
                        .map(|g| g as u32)
                        .collect();
                groups.sort_unstable();
                groups
                    .into_iter()
                    .map(|g| (g, noise_rng.sample::<f64, _>(StandardNormal)))
                    .collect()
            })
            .collect();
        Ok(Self {
            params,
            assignments,
        })
    }

    pub fn params(&self) -> &SynthParams {
        &self.params
    }

    /// The model with the population's own `p_base`.
    pub fn model(&self) -> ProbabilityModel {
        self.model_with_p_base(self.params.p_base)
    }

    pub fn model_with_p_base(&self, p_base: f64) -> ProbabilityModel {
        let p = &self.params;
        let (lo, hi) = p.clip_range;
        let memberships = self
            .assignments
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(group, z)| {
                        let mean = p_base + p.group_slope * group as f64;
                        Membership {
                            group,
                            prob: (mean + p.gaussian_std * z).clamp(lo, hi),
                        }
                    })
                    .collect()
            })
            .collect();
        let layout = SlotLayout::uniform(p.groups, p.slots_per_group)
            .expect("validated parameters");
        ProbabilityModel::GroupStructured(
            GroupModel::new(layout, memberships).expect("valid synthetic memberships"),
        )
    }
}

/// Builds the synthetic model described by `params`.
pub fn build_synthetic_model(params: &SynthParams) -> Result<ProbabilityModel> {
    Ok(SyntheticPopulation::new(params.clone())?.model())
}
