use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use log::info;
use serde::Serialize;

use matchrank_core::eval::{avg_match_curve, evaluate_ranking};
use matchrank_core::io::{
    ingest_label_probabilities, parse_slots_spec, read_json, read_probability_triplets,
    write_json, write_relevance, ModelFile, ModelMetadata, RankingFile, RankingSeeds,
};
use matchrank_core::ranker;
use matchrank_core::{
    build_synthetic_model, Algorithm, EvalReport, RankerConfig, Ranking, SampleSet, SynthParams,
};

use crate::{require, EvalOpts, Failure, IngestOpts, RankOpts, ReportOpts, SampleOpts, SynthOpts};

const DEFAULT_SAMPLES: usize = 200;
const DEFAULT_DRAWS: usize = 100;

pub fn synth(o: SynthOpts) -> Result<(), Failure> {
    let out = require(o.out, "out")?;
    let d = SynthParams::default();
    let params = SynthParams {
        groups: o.groups.unwrap_or(d.groups),
        slots_per_group: o.slots_per_group.unwrap_or(d.slots_per_group),
        candidates: o.candidates.unwrap_or(d.candidates),
        memberships: o.memberships.unwrap_or(d.memberships),
        p_base: o.p_base.unwrap_or(d.p_base),
        seed: require(o.seed, "seed")?,
        ..d
    };
    params.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let model = build_synthetic_model(&params)?;
    let mut metadata = ModelMetadata::describe(&model);
    metadata.synth = Some(params);
    info!("{} candidates, {} slots", metadata.candidates, metadata.slots);
    write_json(&out, &ModelFile { model, metadata })?;
    Ok(())
}

pub fn ingest(o: IngestOpts) -> Result<(), Failure> {
    let input = require(o.input, "input")?;
    let spec = require(o.slots_per_label, "slots_per_label")?;
    let out = require(o.out, "out")?;
    let labels = read_probability_triplets(BufReader::new(open(&input)?))
        .map_err(|e| Failure::data(format!("{}: {e}", input.display())))?;
    let slots = parse_slots_spec(&spec, labels.cols).map_err(|e| Failure::usage(e.to_string()))?;
    let model = ingest_label_probabilities(&labels, &slots, o.max_clip)?;
    let mut metadata = ModelMetadata::describe(&model);
    metadata.max_clip = o.max_clip;
    write_json(&out, &ModelFile { model, metadata })?;
    Ok(())
}

pub fn sample(o: SampleOpts) -> Result<(), Failure> {
    let model = read_model(&require(o.model, "model")?)?;
    let n = o.n_samples.unwrap_or(DEFAULT_SAMPLES);
    let seed = require(o.sample_seed, "sample_seed")?;
    let dir = require(o.out_dir, "out_dir")?;
    let samples = SampleSet::draw(&model.model, n, seed)?;
    fs::create_dir_all(&dir).map_err(matchrank_core::Error::from)?;
    let width = n.saturating_sub(1).to_string().len();
    for (i, m) in samples.samples().iter().enumerate() {
        let path = dir.join(format!("sample_{i:0width$}.txt"));
        let file = File::create(&path).map_err(matchrank_core::Error::from)?;
        write_relevance(BufWriter::new(file), m)?;
    }
    Ok(())
}

pub fn rank(o: RankOpts) -> Result<(), Failure> {
    let model = read_model(&require(o.model, "model")?)?.model;
    let algorithm: Algorithm = require(o.algorithm, "algorithm")?
        .parse()
        .map_err(|e: matchrank_core::Error| Failure::usage(e.to_string()))?;
    let n = o.n_samples.unwrap_or(DEFAULT_SAMPLES);
    let sample_seed = require(o.sample_seed, "sample_seed")?;
    let seed = match algorithm {
        Algorithm::Random => require(o.seed, "seed")?,
        _ => o.seed.unwrap_or(0),
    };
    if o.from_model_marginals && algorithm.score_rule().is_none() && algorithm != Algorithm::Random {
        return Err(Failure::usage(format!(
            "--from-model-marginals applies to score baselines, not {algorithm}"
        )));
    }
    let cfg = RankerConfig {
        algorithm,
        seed,
        stop_at: o.stop_at,
    };
    let out = require(o.out, "out")?;
    let samples = SampleSet::draw(&model, n, sample_seed)?;
    let ranking = if o.from_model_marginals {
        ranker::rank_from_marginals(&model.marginals(), &cfg)?
    } else {
        ranker::rank(&samples, &cfg)?
    };
    let prefix_gain = match ranking.prefix_gain {
        Some(ref gain) => gain.clone(),
        None => avg_match_curve(&ranking, &samples)?
            .into_iter()
            .map(|m| m.total)
            .collect(),
    };
    if let Some(path) = &o.curve {
        write_curve(path, &prefix_gain, n)?;
    }
    let file = RankingFile {
        algorithm,
        seeds: RankingSeeds {
            sample_seed,
            ranker_seed: seed,
        },
        n_samples: n,
        from_model_marginals: o.from_model_marginals,
        candidates: model.candidates(),
        slots: model.slots(),
        order: ranking.order,
        prefix_gain,
    };
    write_json(&out, &file)?;
    Ok(())
}

#[derive(Serialize)]
struct CurveRow {
    k: usize,
    avg_matched: f64,
}

fn write_curve(path: &Path, prefix_gain: &[u64], n: usize) -> Result<(), Failure> {
    let mut w = csv::Writer::from_path(path).map_err(csv_failure)?;
    for (i, &total) in prefix_gain.iter().enumerate() {
        let row = CurveRow {
            k: i + 1,
            avg_matched: total as f64 / n as f64,
        };
        w.serialize(row).map_err(csv_failure)?;
    }
    w.flush().map_err(matchrank_core::Error::from)?;
    Ok(())
}

pub fn eval(o: EvalOpts) -> Result<(), Failure> {
    let model = read_model(&require(o.model, "model")?)?.model;
    let ranking_path = require(o.ranking, "ranking")?;
    let file: RankingFile = read_json(&ranking_path)?;
    let draws = o.draws.unwrap_or(DEFAULT_DRAWS);
    let eval_seed = require(o.eval_seed, "eval_seed")?;
    let out = require(o.out, "out")?;
    if (file.candidates, file.slots) != (model.candidates(), model.slots()) {
        return Err(Failure::data(format!(
            "dimension mismatch: ranking is for {} candidates x {} slots, model has {} x {}",
            file.candidates,
            file.slots,
            model.candidates(),
            model.slots()
        )));
    }
    let stop_at = (file.order.len() < file.candidates).then_some(file.order.len());
    let ranking = Ranking::new(file.order);
    let mut report = evaluate_ranking(&ranking, &model, draws, eval_seed)?;
    report.label = o.label.unwrap_or_else(|| file.algorithm.to_string());
    report.ranker = Some(RankerConfig {
        algorithm: file.algorithm,
        seed: file.seeds.ranker_seed,
        stop_at,
    });
    report.n_samples = Some(file.n_samples);
    report.sample_seed = Some(file.seeds.sample_seed);
    write_json(&out, &report)?;
    Ok(())
}

#[derive(Serialize)]
struct TableRow<'a> {
    label: &'a str,
    normalized_mean: Option<f64>,
    normalized_std: Option<f64>,
    unfillable: usize,
    draws: usize,
}

pub fn report(o: ReportOpts) -> Result<(), Failure> {
    if o.reports.is_empty() {
        return Err(Failure::usage("no report files given"));
    }
    let mut reports: Vec<EvalReport> = o
        .reports
        .iter()
        .map(|p| read_json(p).map_err(|e| Failure::data(format!("{}: {e}", p.display()))))
        .collect::<Result<_, _>>()?;
    // Reports without a defined mean sort last.
    reports.sort_by(|a, b| {
        let key = |r: &EvalReport| r.normalized_mean.unwrap_or(f64::INFINITY);
        key(a).total_cmp(&key(b))
    });
    let rows: Vec<TableRow> = reports
        .iter()
        .map(|r| TableRow {
            label: &r.label,
            normalized_mean: r.normalized_mean,
            normalized_std: r.normalized_std,
            unfillable: r.unfillable_count,
            draws: r.draws,
        })
        .collect();
    print_table(&rows).map_err(matchrank_core::Error::from)?;
    if let Some(path) = &o.csv {
        let mut w = csv::Writer::from_path(path).map_err(csv_failure)?;
        for row in &rows {
            w.serialize(row).map_err(csv_failure)?;
        }
        w.flush().map_err(matchrank_core::Error::from)?;
    }
    Ok(())
}

fn print_table(rows: &[TableRow]) -> std::io::Result<()> {
    let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(0).max("ranker".len());
    let mut out = std::io::stdout().lock();
    writeln!(out, "{:<width$}  {:>17}  {:>10}", "ranker", "k_min / |S|", "unfillable")?;
    for r in rows {
        let score = match (r.normalized_mean, r.normalized_std) {
            (Some(m), Some(s)) => format!("{m:.3} ± {s:.3}"),
            _ => "n/a".to_string(),
        };
        writeln!(
            out,
            "{:<width$}  {:>17}  {:>10}",
            r.label,
            score,
            format!("{}/{}", r.unfillable, r.draws)
        )?;
    }
    Ok(())
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn read_model(path: &Path) -> Result<ModelFile, Failure> {
    read_json(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn csv_failure(e: csv::Error) -> Failure {
    Failure::data(format!("csv: {e}"))
}
