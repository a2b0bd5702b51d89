//! Score-and-sort baselines and the random ranking.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Ranking, SampleSet, SparseMarginals};
use crate::rng::{substream, Purpose};

/// Smallest `1 - p` used by the OR rule. A certain entry contributes
/// `-ln(1e-12) ≈ 27.63` instead of infinity.
pub const OR_COMPLEMENT_FLOOR: f64 = 1e-12;

/// How per-slot marginals are aggregated into one candidate score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreRule {
    /// Product of the nonzero probabilities (as a sum of logs).
    And,
    /// `1 - prod(1 - p)` over nonzero entries, as `sum(-ln(1 - p))`.
    Or,
    /// Total relevance: sum of probabilities.
    Tr,
    /// Total relevance with each slot divided by its column sum.
    Ntr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineScores {
    pub scores: Vec<f64>,
    /// OR terms whose `1 - p` fell below [`OR_COMPLEMENT_FLOOR`].
    pub clamped_terms: usize,
}

/// Fraction of samples in which each (candidate, slot) edge is present.
pub fn empirical_marginals(samples: &SampleSet) -> SparseMarginals {
    let n = samples.len() as f64;
    let mut counts = vec![0u32; samples.slots()];
    let mut touched = Vec::new();
    let rows = (0..samples.candidates()).map(|a| {
        for r in samples.samples() {
            for &s in r.neighbors(a) {
                if counts[s as usize] == 0 {
                    touched.push(s);
                }
                counts[s as usize] += 1;
            }
        }
        touched.sort_unstable();
        let row = touched
            .drain(..)
            .map(|s| (s, std::mem::take(&mut counts[s as usize]) as f64 / n))
            .collect();
        row
    });
    SparseMarginals::from_rows(samples.slots(), rows.collect::<Vec<_>>())
}

/// Per-candidate scores under `rule`. Zero entries are skipped by every
/// rule; a candidate without nonzero entries gets `-inf` under AND.
pub fn baseline_scores(marginals: &SparseMarginals, rule: ScoreRule) -> BaselineScores {
    let mut clamped_terms = 0;
    let column_sums = match rule {
        ScoreRule::Ntr => marginals.column_sums(),
        _ => Vec::new(),
    };
    let scores = (0..marginals.candidates())
        .map(|a| {
            let row = marginals.row(a);
            match rule {
                ScoreRule::And if row.is_empty() => f64::NEG_INFINITY,
                ScoreRule::And => row.iter().map(|&(_, p)| p.ln()).sum(),
                ScoreRule::Or => row
                    .iter()
                    .map(|&(_, p)| {
                        let complement = 1.0 - p;
                        if complement < OR_COMPLEMENT_FLOOR {
                            clamped_terms += 1;
                            -OR_COMPLEMENT_FLOOR.ln()
                        } else {
                            -complement.ln()
                        }
                    })
                    .sum(),
                ScoreRule::Tr => row.iter().map(|&(_, p)| p).sum(),
                ScoreRule::Ntr => row
                    .iter()
                    .filter(|&&(s, _)| column_sums[s as usize] > 0.0)
                    .map(|&(s, p)| p / column_sums[s as usize])
                    .sum(),
            }
        })
        .collect();
    BaselineScores {
        scores,
        clamped_terms,
    }
}

/// Sorts candidates by `scores` descending, breaking ties by `secondary`
/// descending and then by index ascending.
pub fn rank_by_scores(scores: &[f64], secondary: &[f64], stop_at: Option<usize>) -> Ranking {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then(secondary[b].total_cmp(&secondary[a]))
            .then(a.cmp(&b))
    });
    if let Some(k) = stop_at {
        order.truncate(k);
    }
    Ranking::new(order)
}

/// Secondary sort key shared by every ranker: the NTR score of the
/// empirical marginals. Once the sampled objective is saturated it keeps
/// candidates for scarce slots ahead of candidates for contested ones.
pub(crate) fn tiebreak_scores(samples: &SampleSet) -> Vec<f64> {
    baseline_scores(&empirical_marginals(samples), ScoreRule::Ntr).scores
}

/// Ranks by `rule` applied to `marginals`, ties broken by the NTR score.
pub fn rank_baseline(
    marginals: &SparseMarginals,
    rule: ScoreRule,
    stop_at: Option<usize>,
) -> Result<(Ranking, BaselineScores)> {
    check_stop_at(marginals.candidates(), stop_at)?;
    let scores = baseline_scores(marginals, rule);
    if scores.clamped_terms > 0 {
        log::warn!(
            "OR rule: {} terms with probability 1 clamped to {:.2}",
            scores.clamped_terms,
            -OR_COMPLEMENT_FLOOR.ln()
        );
    }
    let secondary = match rule {
        ScoreRule::Ntr => vec![0.0; scores.scores.len()],
        _ => baseline_scores(marginals, ScoreRule::Ntr).scores,
    };
    Ok((rank_by_scores(&scores.scores, &secondary, stop_at), scores))
}

/// Uniformly random permutation of `c` candidates (Fisher-Yates).
pub fn random_ranking(c: usize, seed: u64) -> Result<Ranking> {
    if c == 0 {
        return Err(Error::input("cannot rank zero candidates"));
    }
    let mut order: Vec<usize> = (0..c).collect();
    order.shuffle(&mut substream(seed, Purpose::Shuffle, 0));
    Ok(Ranking::new(order))
}

pub(crate) fn check_stop_at(c: usize, stop_at: Option<usize>) -> Result<()> {
    match stop_at {
        Some(k) if !(1..=c).contains(&k) => {
            Err(Error::input(format!("stop_at {k} outside [1, {c}]")))
        }
        _ => Ok(()),
    }
}
