//! Shared domain types: slot layouts, relevance matrices, probability
//! models, sample sets and rankings.

mod layout;
mod probability;
mod ranking;
mod relevance;
mod sample;

pub use layout::SlotLayout;
pub use probability::{GroupModel, Membership, ProbabilityModel, SparseMarginals};
pub use ranking::Ranking;
pub use relevance::RelevanceMatrix;
pub use sample::{AvgMatch, SampleSet};

pub(crate) use probability::check_probability;
