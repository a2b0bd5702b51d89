use rayon::prelude::*;

use super::probability::ProbabilityModel;
use super::relevance::RelevanceMatrix;
use crate::error::{Error, Result};
use crate::matching::mbm;
use crate::rng::{substream, Purpose};

/// `n` i.i.d. relevance matrices drawn from one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    seed: u64,
    samples: Vec<RelevanceMatrix>,
}

/// Monte-Carlo estimate of the expected matching size, kept as an exact
/// integer total over the samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct AvgMatch {
    pub total: u64,
    pub samples: usize,
}

impl AvgMatch {
    pub fn value(self) -> f64 {
        self.total as f64 / self.samples as f64
    }
}

impl SampleSet {
    /// Draws `n` samples; sample `i` uses its own Monte-Carlo sub-stream of
    /// `seed`, so the result does not depend on the thread pool size.
    pub fn draw(model: &ProbabilityModel, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("sample count must be at least 1"));
        }
        let samples = (0..n as u64)
            .into_par_iter()
            .map(|i| model.draw(&mut substream(seed, Purpose::MonteCarlo, i)))
            .collect();
        Ok(Self { seed, samples })
    }

    /// Wraps already drawn matrices. All must share dimensions.
    pub fn from_samples(samples: Vec<RelevanceMatrix>, seed: u64) -> Result<Self> {
        let Some(first) = samples.first() else {
            return Err(Error::input("sample set is empty"));
        };
        let dims = (first.candidates(), first.slots());
        if let Some(i) = samples
            .iter()
            .position(|r| (r.candidates(), r.slots()) != dims)
        {
            return Err(Error::input(format!(
                "sample {i} has dimensions different from {}x{}",
                dims.0, dims.1
            )));
        }
        Ok(Self { seed, samples })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn candidates(&self) -> usize {
        self.samples[0].candidates()
    }

    pub fn slots(&self) -> usize {
        self.samples[0].slots()
    }

    pub fn samples(&self) -> &[RelevanceMatrix] {
        &self.samples
    }

    /// Average maximum matching size of `pool` over the samples.
    pub fn avg_match(&self, pool: &[usize]) -> Result<AvgMatch> {
        self.samples[0].check_pool(pool)?;
        let total = self
            .samples
            .iter()
            .map(|r| mbm(r, pool).map(|m| m as u64))
            .sum::<Result<u64>>()?;
        Ok(AvgMatch {
            total,
            samples: self.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SparseMarginals;

    fn model() -> ProbabilityModel {
        let triplets = (0..6).flat_map(|a| (0..3).map(move |s| (a, s, 0.4)));
        ProbabilityModel::Independent {
            marginals: SparseMarginals::from_triplets(6, 3, triplets).unwrap(),
        }
    }

    #[test]
    fn draw_is_seed_deterministic() {
        let a = SampleSet::draw(&model(), 5, 11).unwrap();
        let b = SampleSet::draw(&model(), 5, 11).unwrap();
        let c = SampleSet::draw(&model(), 5, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn empty_pool_matches_nothing() {
        let set = SampleSet::draw(&model(), 4, 1).unwrap();
        assert_eq!(set.avg_match(&[]).unwrap().total, 0);
    }

    #[test]
    fn identical_samples_average_to_single_value() {
        let r = RelevanceMatrix::from_edges(3, 2, [(0, 0), (1, 0), (2, 1)]).unwrap();
        let set = SampleSet::from_samples(vec![r.clone(); 7], 0).unwrap();
        let avg = set.avg_match(&[0, 1, 2]).unwrap();
        assert_eq!(avg.value(), 2.0);
        assert_eq!(set.avg_match(&[0, 1]).unwrap().value(), 1.0);
    }

    #[test]
    fn out_of_range_pool_rejected() {
        let set = SampleSet::draw(&model(), 2, 1).unwrap();
        assert!(matches!(set.avg_match(&[6]), Err(Error::Input(_))));
    }

    #[test]
    fn mismatched_samples_rejected() {
        let a = RelevanceMatrix::empty(2, 2);
        let b = RelevanceMatrix::empty(2, 3);
        assert!(SampleSet::from_samples(vec![a, b], 0).is_err());
        assert!(SampleSet::from_samples(vec![], 0).is_err());
        assert!(SampleSet::draw(&model(), 0, 0).is_err());
    }
}
