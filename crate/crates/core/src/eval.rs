//! Evaluation against ground-truth relevance draws.
//!
//! A ranking is scored on a drawn relevance matrix by `k_min`, the length
//! of the shortest prefix whose candidates can be matched to every slot.
//! Reports normalize it by the slot count, so 1.0 is the best possible.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::MatchState;
use crate::model::{AvgMatch, ProbabilityModel, Ranking, RelevanceMatrix, SampleSet};
use crate::ranker::{rank, RankerConfig};
use crate::rng::{substream, Purpose};
use crate::synth::{SynthParams, SyntheticPopulation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Row name in comparison tables, usually the algorithm.
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranker: Option<RankerConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_seed: Option<u64>,
    pub eval_seed: u64,
    pub draws: usize,
    pub slots: usize,
    /// `None` marks a draw the ranking cannot fill completely.
    pub per_draw_kmin: Vec<Option<usize>>,
    /// Mean and population standard deviation of `k_min / slots` over the
    /// fillable draws.
    pub normalized_mean: Option<f64>,
    pub normalized_std: Option<f64>,
    pub unfillable_count: usize,
}

fn check_dims(ranking: &Ranking, candidates: usize) -> Result<()> {
    ranking.validate(candidates).map_err(|e| match e {
        Error::Input(msg) => Error::Input(format!("ranking does not fit the model: {msg}")),
        other => other,
    })
}

/// Maximum matching size after each prefix of the ranking.
pub fn prefix_match_curve(ranking: &Ranking, matrix: &RelevanceMatrix) -> Result<Vec<usize>> {
    check_dims(ranking, matrix.candidates())?;
    let mut state = MatchState::new(matrix);
    Ok(ranking
        .order
        .iter()
        .map(|&a| {
            state.commit_unchecked(a);
            state.size()
        })
        .collect())
}

/// Shortest prefix that fills every slot, or `None` if the ranking
/// never does.
pub fn k_min(ranking: &Ranking, matrix: &RelevanceMatrix) -> Result<Option<usize>> {
    check_dims(ranking, matrix.candidates())?;
    Ok(k_min_unchecked(ranking, matrix))
}

fn k_min_unchecked(ranking: &Ranking, matrix: &RelevanceMatrix) -> Option<usize> {
    let mut state = MatchState::new(matrix);
    if state.is_saturated() {
        return Some(0);
    }
    for (k, &a) in ranking.order.iter().enumerate() {
        state.commit_unchecked(a);
        if state.is_saturated() {
            return Some(k + 1);
        }
    }
    None
}

/// Average matching size over `samples` after each prefix of the ranking.
pub fn avg_match_curve(ranking: &Ranking, samples: &SampleSet) -> Result<Vec<AvgMatch>> {
    check_dims(ranking, samples.candidates())?;
    let mut totals = vec![0u64; ranking.len()];
    let per_sample: Vec<Vec<usize>> = samples
        .samples()
        .par_iter()
        .map(|r| prefix_match_curve(ranking, r))
        .collect::<Result<_>>()?;
    for curve in per_sample {
        for (t, m) in totals.iter_mut().zip(curve) {
            *t += m as u64;
        }
    }
    Ok(totals
        .into_iter()
        .map(|total| AvgMatch {
            total,
            samples: samples.len(),
        })
        .collect())
}

/// Scores `ranking` on `draws` ground-truth matrices drawn from `model`.
/// Draw `i` uses ground-truth sub-stream `i` of `eval_seed`.
pub fn evaluate_ranking(
    ranking: &Ranking,
    model: &ProbabilityModel,
    draws: usize,
    eval_seed: u64,
) -> Result<EvalReport> {
    check_dims(ranking, model.candidates())?;
    if model.slots() == 0 {
        return Err(Error::input("model has no slots"));
    }
    let per_draw_kmin: Vec<Option<usize>> = (0..draws as u64)
        .into_par_iter()
        .map(|i| {
            let truth = model.draw(&mut substream(eval_seed, Purpose::GroundTruth, i));
            k_min_unchecked(ranking, &truth)
        })
        .collect();
    let slots = model.slots();
    let filled: Vec<usize> = per_draw_kmin.iter().flatten().copied().collect();
    let unfillable_count = draws - filled.len();
    if unfillable_count > 0 {
        log::warn!("{unfillable_count} of {draws} draws cannot be filled by the ranking");
    }
    let (normalized_mean, normalized_std) = normalized_mean_std(&filled, slots).unzip();
    Ok(EvalReport {
        label: String::new(),
        ranker: None,
        n_samples: None,
        sample_seed: None,
        eval_seed,
        draws,
        slots,
        per_draw_kmin,
        normalized_mean,
        normalized_std,
        unfillable_count,
    })
}

/// Mean and population standard deviation of `k / slots`, accumulated in
/// exact integer arithmetic.
fn normalized_mean_std(k: &[usize], slots: usize) -> Option<(f64, f64)> {
    if k.is_empty() {
        return None;
    }
    let n = k.len() as u128;
    let sum: u128 = k.iter().map(|&k| k as u128).sum();
    let sum_sq: u128 = k.iter().map(|&k| (k as u128).pow(2)).sum();
    let scale = n as f64 * slots as f64;
    let mean = sum as f64 / scale;
    let var = (n * sum_sq - sum * sum) as f64 / (scale * scale);
    Some((mean, var.sqrt()))
}

/// Seeds and sizes of one evaluation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPlan {
    pub n_samples: usize,
    pub sample_seed: u64,
    pub draws: usize,
    pub eval_seed: u64,
}

/// Draws Monte-Carlo samples, ranks once, and scores the ranking on
/// independent ground-truth draws from the same model.
pub fn evaluate(cfg: &RankerConfig, model: &ProbabilityModel, plan: &EvalPlan) -> Result<EvalReport> {
    let samples = SampleSet::draw(model, plan.n_samples, plan.sample_seed)?;
    evaluate_on_samples(cfg, &samples, model, plan)
}

/// Like [`evaluate`] with the ranker input already drawn, so several
/// rankers can share one sample set.
pub fn evaluate_on_samples(
    cfg: &RankerConfig,
    samples: &SampleSet,
    truth: &ProbabilityModel,
    plan: &EvalPlan,
) -> Result<EvalReport> {
    let ranking = rank(samples, cfg)?;
    let mut report = evaluate_ranking(&ranking, truth, plan.draws, plan.eval_seed)?;
    report.label = cfg.algorithm.to_string();
    report.ranker = Some(cfg.clone());
    report.n_samples = Some(samples.len());
    report.sample_seed = Some(samples.seed());
    Ok(report)
}

/// Ranks with samples from models whose `p_base` is shifted to each of
/// `model_p_bases` and evaluates against the model with `truth.p_base`.
/// All models share the population's memberships and Gaussian offsets.
pub fn misspecification_run(
    truth: &SynthParams,
    model_p_bases: &[f64],
    cfg: &RankerConfig,
    plan: &EvalPlan,
) -> Result<Vec<EvalReport>> {
    let population = SyntheticPopulation::new(truth.clone())?;
    let true_model = population.model();
    model_p_bases
        .iter()
        .map(|&p_base| {
            let probe = SynthParams {
                p_base,
                ..truth.clone()
            };
            probe.validate()?;
            let model = population.model_with_p_base(p_base);
            let samples = SampleSet::draw(&model, plan.n_samples, plan.sample_seed)?;
            let mut report = evaluate_on_samples(cfg, &samples, &true_model, plan)?;
            report.label = format!("{} p_base={p_base}", cfg.algorithm);
            Ok(report)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::mbm;
    use crate::model::SparseMarginals;
    use crate::ranker::Algorithm;
    use crate::testing::{small_instance, random_matrix, shuffled};

    fn ranking(order: &[usize]) -> Ranking {
        Ranking::new(order.to_vec())
    }

    #[test]
    fn identity_curve() {
        let m = RelevanceMatrix::from_edges(5, 3, (0..3).map(|i| (i, i))).unwrap();
        let curve = prefix_match_curve(&ranking(&[0, 1, 2, 3, 4]), &m).unwrap();
        assert_eq!(curve, [1, 2, 3, 3, 3]);
    }

    #[test]
    fn empty_matrix_curve_and_kmin() {
        let m = RelevanceMatrix::empty(4, 2);
        let r = ranking(&[0, 1, 2, 3]);
        assert_eq!(prefix_match_curve(&r, &m).unwrap(), [0; 4]);
        assert_eq!(k_min(&r, &m).unwrap(), None);
    }

    #[test]
    fn fig1_kmin_depends_on_order() {
        let m = small_instance();
        assert_eq!(k_min(&ranking(&[0, 1, 3, 2, 4]), &m).unwrap(), Some(3));
        assert_eq!(k_min(&ranking(&[0, 2, 1, 3, 4]), &m).unwrap(), Some(4));
    }

    #[test]
    fn curve_matches_fresh_matching() {
        for seed in 0..50 {
            let m = random_matrix(9, 4, 0.3, seed);
            let order = shuffled(9, seed);
            let curve = prefix_match_curve(&ranking(&order), &m).unwrap();
            for k in 0..9 {
                assert_eq!(curve[k], mbm(&m, &order[..=k]).unwrap());
            }
        }
    }

    #[test]
    fn avg_curve_matches_avg_match_and_prefix_gain() {
        for seed in 0..20 {
            let samples: Vec<_> = (0..5).map(|i| random_matrix(8, 3, 0.35, seed * 10 + i)).collect();
            let set = SampleSet::from_samples(samples, seed).unwrap();
            let order = shuffled(8, seed);
            let curve = avg_match_curve(&ranking(&order), &set).unwrap();
            for k in 0..8 {
                assert_eq!(curve[k], set.avg_match(&order[..=k]).unwrap());
            }
            let greedy = crate::ranker::matchrank_lazy(&set, &RankerConfig::new(Algorithm::MatchRankLazy)).unwrap();
            let totals: Vec<u64> = avg_match_curve(&greedy, &set).unwrap().iter().map(|m| m.total).collect();
            assert_eq!(Some(totals), greedy.prefix_gain);
            assert_eq!(curve[7], set.avg_match(&(0..8).collect::<Vec<_>>()).unwrap());
        }
    }

    #[test]
    fn mismatched_ranking_rejected() {
        assert!(k_min(&ranking(&[0, 5]), &small_instance()).is_err());
    }

    fn deterministic_model() -> ProbabilityModel {
        let triplets = [(0, 0, 1.0), (1, 1, 1.0), (2, 0, 1.0), (3, 2, 1.0), (2, 1, 1.0)];
        ProbabilityModel::Independent {
            marginals: SparseMarginals::from_triplets(6, 3, triplets).unwrap(),
        }
    }

    #[test]
    fn deterministic_model_has_zero_spread() {
        let plan = EvalPlan {
            n_samples: 4,
            sample_seed: 1,
            draws: 20,
            eval_seed: 2,
        };
        for algorithm in Algorithm::ALL {
            let report = evaluate(&RankerConfig::new(algorithm), &deterministic_model(), &plan).unwrap();
            assert_eq!(report.normalized_std, Some(0.0), "{algorithm}");
            assert_eq!(report.unfillable_count, 0);
            if matches!(algorithm, Algorithm::MatchRank | Algorithm::MatchRankLazy) {
                assert_eq!(report.normalized_mean, Some(1.0));
            }
        }
    }

    #[test]
    fn unfillable_draws_are_counted() {
        let triplets = [(0, 0, 1.0), (1, 1, 0.5)];
        let model = ProbabilityModel::Independent {
            marginals: SparseMarginals::from_triplets(2, 2, triplets).unwrap(),
        };
        let report = evaluate_ranking(&ranking(&[0, 1]), &model, 200, 3).unwrap();
        let defined = report.per_draw_kmin.iter().flatten().count();
        assert_eq!(defined + report.unfillable_count, 200);
        assert!(report.unfillable_count > 50 && report.unfillable_count < 150);
        assert_eq!(report.normalized_mean, Some(1.0));
    }

    #[test]
    fn matched_misspecification_equals_evaluate() {
        let params = SynthParams {
            groups: 3,
            slots_per_group: 4,
            candidates: 60,
            seed: 9,
            ..SynthParams::default()
        };
        let plan = EvalPlan {
            n_samples: 20,
            sample_seed: 4,
            draws: 15,
            eval_seed: 5,
        };
        let cfg = RankerConfig::new(Algorithm::MatchRankLazy);
        let runs = misspecification_run(&params, &[0.3], &cfg, &plan).unwrap();
        let model = crate::synth::build_synthetic_model(&params).unwrap();
        let direct = evaluate(&cfg, &model, &plan).unwrap();
        assert_eq!(runs[0].per_draw_kmin, direct.per_draw_kmin);
        assert_eq!(runs[0].normalized_mean, direct.normalized_mean);
    }
}
