//! Maximum bipartite matching: Hopcroft-Karp for one-off computations and
//! an incrementally maintained matching for growing candidate pools.

mod hopcroft_karp;
mod state;

pub use hopcroft_karp::mbm;
pub use state::MatchState;
