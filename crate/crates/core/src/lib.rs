//! Ranking candidates for review when relevant candidates must fill a
//! fixed set of slots.
//!
//! The objective of a candidate set is the expected size of a maximum
//! bipartite matching between the set and the slots, estimated from
//! Monte-Carlo samples of the relevance matrix. [`ranker::matchrank_lazy`]
//! builds a ranking greedily; every prefix is a `(1 - 1/e)` approximation
//! of the best set of its size on the sampled objective.
//!
//! ```
//! use matchrank_core::model::{ProbabilityModel, SampleSet, SparseMarginals};
//! use matchrank_core::ranker::{rank, Algorithm, RankerConfig};
//!
//! // Two candidates for slot 0, one for slot 1.
//! let marginals = SparseMarginals::from_triplets(
//!     3, 2, [(0, 0, 0.9), (1, 0, 0.8), (2, 1, 0.5)],
//! ).unwrap();
//! let model = ProbabilityModel::Independent { marginals };
//! let samples = SampleSet::draw(&model, 200, 7).unwrap();
//! let ranking = rank(&samples, &RankerConfig::new(Algorithm::MatchRankLazy)).unwrap();
//! assert_eq!(ranking.order[..2], [0, 2]);
//! ```

pub mod error;
pub mod eval;
pub mod io;
pub mod matching;
pub mod model;
pub mod ranker;
pub mod rng;
pub mod synth;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use eval::{evaluate, EvalPlan, EvalReport};
pub use matching::{mbm, MatchState};
pub use model::{
    AvgMatch, GroupModel, Membership, ProbabilityModel, Ranking, RelevanceMatrix, SampleSet,
    SlotLayout, SparseMarginals,
};
pub use ranker::{Algorithm, RankerConfig};
pub use synth::{build_synthetic_model, SynthParams};
