//! Shared inputs for the benchmarks.

use matchrank_core::{build_synthetic_model, RelevanceMatrix, SampleSet, SynthParams};

/// Monte-Carlo samples of a small synthetic model with the default
/// relevance levels.
pub fn synthetic_samples(groups: usize, slots_per_group: usize, candidates: usize, n: usize) -> SampleSet {
    let params = SynthParams {
        groups,
        slots_per_group,
        candidates,
        seed: 1,
        ..SynthParams::default()
    };
    let model = build_synthetic_model(&params).expect("valid params");
    SampleSet::draw(&model, n, 2).expect("draw samples")
}

/// One ground-truth draw of the same kind of model.
pub fn synthetic_matrix(groups: usize, slots_per_group: usize, candidates: usize) -> RelevanceMatrix {
    synthetic_samples(groups, slots_per_group, candidates, 1).samples()[0].clone()
}
