//! File formats.
//!
//! Sparse matrices use a whitespace-separated text format: a header line
//! `rows cols nnz` followed by `nnz` lines `row col value` with 0-based
//! indices. Probability matrices omit zero entries; relevance dumps write
//! every edge with value `1`. Models, rankings and reports are JSON.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_probability, ProbabilityModel, RelevanceMatrix, SparseMarginals};
use crate::ranker::Algorithm;
use crate::synth::SynthParams;

/// Contents of a sparse triplet file.
#[derive(Debug, Clone, PartialEq)]
pub struct Triplets {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

pub fn read_triplets<R: BufRead>(reader: R) -> Result<Triplets> {
    read_checked(reader, |_| None)
}

/// Reads a triplet file whose values must be probabilities.
pub fn read_probability_triplets<R: BufRead>(reader: R) -> Result<Triplets> {
    read_checked(reader, |p| {
        check_probability(p)
            .is_err()
            .then(|| format!("probability {p} outside [0, 1]"))
    })
}

/// Reads triplets, rejecting any value for which `check` returns a message.
fn read_checked<R: BufRead>(reader: R, check: impl Fn(f64) -> Option<String>) -> Result<Triplets> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(_, line)| line.as_ref().map_or(true, |l| !l.trim().is_empty()));
    let Some((header_no, header)) = lines.next() else {
        return Err(Error::parse(1, "missing header `rows cols nnz`"));
    };
    let header = header?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [rows, cols, nnz] = fields[..] else {
        return Err(Error::parse(header_no, "header must be `rows cols nnz`"));
    };
    let rows: usize = parse_field(rows, header_no, "row count")?;
    let cols: usize = parse_field(cols, header_no, "column count")?;
    let nnz: usize = parse_field(nnz, header_no, "entry count")?;
    let mut entries = Vec::with_capacity(nnz);
    let mut last_line = header_no;
    for (no, line) in lines {
        let line = line?;
        last_line = no;
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [r, c, v] = fields[..] else {
            return Err(Error::parse(no, "expected `row col value`"));
        };
        let r: usize = parse_field(r, no, "row index")?;
        let c: usize = parse_field(c, no, "column index")?;
        let v: f64 = parse_field(v, no, "value")?;
        if let Some(message) = check(v) {
            return Err(Error::parse(no, message));
        }
        if r >= rows || c >= cols {
            return Err(Error::parse(no, format!("index ({r}, {c}) outside {rows}x{cols}")));
        }
        entries.push((r, c, v));
    }
    if entries.len() != nnz {
        return Err(Error::parse(
            last_line,
            format!("header announces {nnz} entries, found {}", entries.len()),
        ));
    }
    Ok(Triplets {
        rows,
        cols,
        entries,
    })
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} {field:?}")))
}

pub fn write_triplets<W, I>(mut writer: W, rows: usize, cols: usize, nnz: usize, entries: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = (usize, usize, f64)>,
{
    writeln!(writer, "{rows} {cols} {nnz}")?;
    for (r, c, v) in entries {
        writeln!(writer, "{r} {c} {v}")?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a candidate-by-slot probability matrix.
pub fn read_marginals<R: BufRead>(reader: R) -> Result<SparseMarginals> {
    let t = read_probability_triplets(reader)?;
    SparseMarginals::from_triplets(t.rows, t.cols, t.entries)
}

pub fn write_marginals<W: Write>(writer: W, m: &SparseMarginals) -> Result<()> {
    write_triplets(writer, m.candidates(), m.slots(), m.nnz(), m.triplets())
}

fn check_probabilities(t: &Triplets) -> Result<()> {
    match t.entries.iter().position(|&(_, _, p)| check_probability(p).is_err()) {
        Some(i) => Err(Error::input(format!(
            "entry {i} has probability {} outside [0, 1]",
            t.entries[i].2
        ))),
        None => Ok(()),
    }
}

pub fn read_relevance<R: BufRead>(reader: R) -> Result<RelevanceMatrix> {
    let t = read_checked(reader, |v| (v != 1.0).then(|| "relevance entries must be 1".to_string()))?;
    RelevanceMatrix::from_edges(t.rows, t.cols, t.entries.into_iter().map(|(a, s, _)| (a, s)))
}

pub fn write_relevance<W: Write>(writer: W, m: &RelevanceMatrix) -> Result<()> {
    write_triplets(
        writer,
        m.candidates(),
        m.slots(),
        m.edge_count(),
        m.edges().map(|(a, s)| (a, s, 1.0)),
    )
}

/// Parses a slots-per-label spec: one count for every label (`"10"`) or a
/// comma-separated count per label (`"5,10,15"`).
pub fn parse_slots_spec(spec: &str, labels: usize) -> Result<Vec<usize>> {
    let counts: Vec<usize> = spec
        .split(',')
        .map(|f| {
            f.trim()
                .parse()
                .map_err(|_| Error::input(format!("invalid slot count {f:?}")))
        })
        .collect::<Result<_>>()?;
    match counts[..] {
        [n] => Ok(vec![n; labels]),
        _ if counts.len() == labels => Ok(counts),
        _ => Err(Error::input(format!(
            "slot spec lists {} counts for {labels} labels",
            counts.len()
        ))),
    }
}

/// Turns a candidate-by-label probability matrix into an independent
/// model over slots: every slot of label `l` inherits the candidate's
/// probability for `l`, optionally clamped to `max_clip`.
pub fn ingest_label_probabilities(
    labels: &Triplets,
    slots_per_label: &[usize],
    max_clip: Option<f64>,
) -> Result<ProbabilityModel> {
    check_probabilities(labels)?;
    if slots_per_label.len() != labels.cols {
        return Err(Error::input(format!(
            "{} slot counts for {} labels",
            slots_per_label.len(),
            labels.cols
        )));
    }
    if let Some(max) = max_clip {
        check_probability(max)?;
    }
    let mut start = Vec::with_capacity(labels.cols + 1);
    start.push(0);
    for &n in slots_per_label {
        start.push(start.last().unwrap() + n);
    }
    let slots = *start.last().unwrap();
    let triplets = labels.entries.iter().flat_map(|&(a, l, p)| {
        let p = max_clip.map_or(p, |max| p.min(max));
        (start[l]..start[l + 1]).map(move |s| (a, s, p))
    });
    let marginals = SparseMarginals::from_triplets(labels.rows, slots, triplets)?;
    Ok(ProbabilityModel::Independent { marginals })
}

/// Summary written next to a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMetadata {
    pub candidates: usize,
    pub slots: usize,
    pub nonzero_marginals: usize,
    pub prob_min: Option<f64>,
    pub prob_mean: Option<f64>,
    pub prob_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_clip: Option<f64>,
}

impl ModelMetadata {
    /// Describes `model`. Probability statistics are over the nonzero
    /// (candidate, group) entries for group models and over the nonzero
    /// (candidate, slot) marginals otherwise.
    pub fn describe(model: &ProbabilityModel) -> Self {
        let (probs, group_sizes): (Vec<f64>, _) = match model {
            ProbabilityModel::GroupStructured(m) => (
                (0..m.candidates())
                    .flat_map(|a| m.memberships(a).iter().map(|x| x.prob))
                    .collect(),
                Some(m.group_sizes()),
            ),
            ProbabilityModel::Independent { marginals } => {
                (marginals.triplets().map(|(_, _, p)| p).collect(), None)
            }
        };
        let nonzero = probs.iter().filter(|&&p| p > 0.0).count();
        Self {
            candidates: model.candidates(),
            slots: model.slots(),
            nonzero_marginals: match model {
                ProbabilityModel::Independent { marginals } => marginals.nnz(),
                ProbabilityModel::GroupStructured(_) => model.marginals().nnz(),
            },
            prob_min: probs.iter().copied().reduce(f64::min),
            prob_mean: (nonzero > 0).then(|| probs.iter().sum::<f64>() / probs.len() as f64),
            prob_max: probs.iter().copied().reduce(f64::max),
            group_sizes,
            synth: None,
            max_clip: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub model: ProbabilityModel,
    pub metadata: ModelMetadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingSeeds {
    pub sample_seed: u64,
    pub ranker_seed: u64,
}

/// A ranking together with how it was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingFile {
    pub algorithm: Algorithm,
    pub seeds: RankingSeeds,
    pub n_samples: usize,
    /// Baselines scored the model's marginals instead of sample estimates.
    #[serde(default)]
    pub from_model_marginals: bool,
    pub candidates: usize,
    pub slots: usize,
    pub order: Vec<usize>,
    /// Total matching size over the samples after each prefix; divide by
    /// `n_samples` for the average.
    pub prefix_gain: Vec<u64>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path)?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
