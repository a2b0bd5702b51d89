//! Ranking algorithms: greedy matching maximization (plain and lazy) and
//! the heuristic baselines.
//!
//! Ties are broken the same way everywhere: by the algorithm's own key,
//! then by the NTR score (each marginal divided by its slot's column sum),
//! then by smaller candidate index.

mod baselines;
mod greedy;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use baselines::{
    baseline_scores, empirical_marginals, random_ranking, rank_baseline, rank_by_scores,
    BaselineScores, ScoreRule, OR_COMPLEMENT_FLOOR,
};
pub use greedy::{lazy_greedy, naive_greedy, total_marginal_gain, GreedyStats, LazyQueueEntry};

use crate::error::{Error, Result};
use crate::model::{Ranking, SampleSet, SparseMarginals};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    #[serde(rename = "matchrank")]
    MatchRank,
    #[serde(rename = "matchrank-lazy")]
    MatchRankLazy,
    And,
    Or,
    Tr,
    Ntr,
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::MatchRank,
        Algorithm::MatchRankLazy,
        Algorithm::And,
        Algorithm::Or,
        Algorithm::Tr,
        Algorithm::Ntr,
        Algorithm::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MatchRank => "matchrank",
            Algorithm::MatchRankLazy => "matchrank-lazy",
            Algorithm::And => "and",
            Algorithm::Or => "or",
            Algorithm::Tr => "tr",
            Algorithm::Ntr => "ntr",
            Algorithm::Random => "random",
        }
    }

    /// The score rule of a score-and-sort baseline.
    pub fn score_rule(self) -> Option<ScoreRule> {
        match self {
            Algorithm::And => Some(ScoreRule::And),
            Algorithm::Or => Some(ScoreRule::Or),
            Algorithm::Tr => Some(ScoreRule::Tr),
            Algorithm::Ntr => Some(ScoreRule::Ntr),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|a| a.name()).collect();
                Error::input(format!(
                    "unknown algorithm {s:?}; valid names: {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankerConfig {
    pub algorithm: Algorithm,
    /// Only used by the random baseline.
    #[serde(default)]
    pub seed: u64,
    /// Rank only the top `stop_at` candidates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop_at: Option<usize>,
}

impl RankerConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            seed: 0,
            stop_at: None,
        }
    }
}

/// Greedy ranking that re-evaluates every remaining candidate each round.
pub fn matchrank(samples: &SampleSet, cfg: &RankerConfig) -> Result<Ranking> {
    naive_greedy(samples, cfg.stop_at).map(|(r, _)| r)
}

/// Greedy ranking with lazily re-evaluated gains; same output as [`matchrank`].
pub fn matchrank_lazy(samples: &SampleSet, cfg: &RankerConfig) -> Result<Ranking> {
    lazy_greedy(samples, cfg.stop_at).map(|(r, _)| r)
}

/// Runs the configured algorithm on `samples`. Baselines score the
/// empirical marginals of the samples.
pub fn rank(samples: &SampleSet, cfg: &RankerConfig) -> Result<Ranking> {
    match cfg.algorithm {
        Algorithm::MatchRank => matchrank(samples, cfg),
        Algorithm::MatchRankLazy => matchrank_lazy(samples, cfg),
        Algorithm::Random => random_prefix(samples.candidates(), cfg),
        other => {
            let rule = other.score_rule().expect("score baseline");
            rank_baseline(&empirical_marginals(samples), rule, cfg.stop_at).map(|(r, _)| r)
        }
    }
}

/// Runs a baseline directly on given marginals, e.g. a model's true ones.
pub fn rank_from_marginals(marginals: &SparseMarginals, cfg: &RankerConfig) -> Result<Ranking> {
    match cfg.algorithm {
        Algorithm::Random => random_prefix(marginals.candidates(), cfg),
        other => match other.score_rule() {
            Some(rule) => rank_baseline(marginals, rule, cfg.stop_at).map(|(r, _)| r),
            None => Err(Error::input(format!("{other} needs Monte-Carlo samples"))),
        },
    }
}

fn random_prefix(c: usize, cfg: &RankerConfig) -> Result<Ranking> {
    baselines::check_stop_at(c, cfg.stop_at)?;
    let mut ranking = random_ranking(c, cfg.seed)?;
    if let Some(k) = cfg.stop_at {
        ranking.order.truncate(k);
    }
    Ok(ranking)
}
