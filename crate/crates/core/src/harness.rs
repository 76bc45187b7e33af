//! Leave-one-speaker-out evaluation.
//!
//! Each fold trains on every speaker but one and tests on the held-out
//! speaker's full, unbalanced data. Training sets are balanced by random
//! subsampling of the capped classes before any feature selection or
//! standardisation. Three feature regimes are supported:
//!
//! * `FSn`: all 5,967 features.
//! * `FSc`: CFS on each fold's balanced training set; the features chosen
//!   in every fold are then used for a second training pass.
//! * `FSf`: one CFS run on the whole (balanced) data set. This leaks the
//!   test speakers into selection and is reported as a diagnostic only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cfs::{best_first_select, intersect_fold_selections, CfsError, DEFAULT_STALL_LIMIT};
use crate::corpus::{segment_from_audio, Corpus, CorpusError, LaughterLabel, SuperClass};
use crate::dsp::{Analyzer, DspError, FrameConfig};
use crate::featureset::{assemble_with, feature_name, FeatureError, FeatureRow, FeatureTable};
use crate::svm::{SmoConfig, SvmError, SvmModel};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Cfs(#[from] CfsError),
    #[error(transparent)]
    Svm(#[from] SvmError),
    #[error("invalid task: {0}")]
    InvalidTask(String),
    #[error("leave-one-speaker-out needs at least two speakers, found {0}")]
    TooFewSpeakers(usize),
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("no feature was selected in every fold")]
    EmptyIntersection,
    #[error("segment `{segment}` has unknown label `{label}` for this task")]
    UnknownLabel { segment: String, label: String },
    #[error("every fold was skipped")]
    NoUsableFold,
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Turn,
    Word,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "FSn")]
    FsN,
    #[serde(rename = "FSc")]
    FsC,
    #[serde(rename = "FSf")]
    FsF,
}

impl Regime {
    pub fn token(self) -> &'static str {
        match self {
            Regime::FsN => "FSn",
            Regime::FsC => "FSc",
            Regime::FsF => "FSf",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Regime {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "FSn" | "fsn" => Ok(Regime::FsN),
            "FSc" | "fsc" => Ok(Regime::FsC),
            "FSf" | "fsf" => Ok(Regime::FsF),
            other => Err(HarnessError::InvalidTask(format!(
                "unknown regime `{other}` (FSn, FSc, FSf)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskConfig {
    pub granularity: Granularity,
    pub n_classes: usize,
    pub regime: Regime,
    /// Training caps by class name; classes not listed are never subsampled.
    pub balance_limits: BTreeMap<String, usize>,
    pub seed: u64,
    pub smo: SmoConfig,
    pub stall_limit: usize,
}

impl TaskConfig {
    /// Task with the default caps: word 6-class W 100, word 2/3-class W 300,
    /// turn 2-class W 237, turn 3-class W 150 and SL 150.
    pub fn new(
        granularity: Granularity,
        n_classes: usize,
        regime: Regime,
        seed: u64,
    ) -> Result<Self> {
        let caps: &[(&str, usize)] = match (granularity, n_classes) {
            (Granularity::Word, 6) => &[("W", 100)],
            (Granularity::Word, 2 | 3) => &[("W", 300)],
            (Granularity::Turn, 2) => &[("W", 237)],
            (Granularity::Turn, 3) => &[("W", 150), ("SL", 150)],
            _ => {
                return Err(HarnessError::InvalidTask(format!(
                    "{n_classes} classes not available at {granularity:?} level"
                )))
            }
        };
        Ok(Self {
            granularity,
            n_classes,
            regime,
            balance_limits: caps.iter().map(|&(c, n)| (c.to_string(), n)).collect(),
            seed,
            smo: SmoConfig::default(),
            stall_limit: DEFAULT_STALL_LIMIT,
        })
    }

    /// Parses `word2`, `word3`, `word6`, `turn2` or `turn3`.
    pub fn from_task_name(name: &str, regime: Regime, seed: u64) -> Result<Self> {
        let (g, n) = match name {
            "word2" => (Granularity::Word, 2),
            "word3" => (Granularity::Word, 3),
            "word6" => (Granularity::Word, 6),
            "turn2" => (Granularity::Turn, 2),
            "turn3" => (Granularity::Turn, 3),
            other => {
                return Err(HarnessError::InvalidTask(format!(
                    "unknown task `{other}` (word2, word3, word6, turn2, turn3)"
                )))
            }
        };
        Self::new(g, n, regime, seed)
    }

    pub fn task_name(&self) -> String {
        let g = match self.granularity {
            Granularity::Turn => "turn",
            Granularity::Word => "word",
        };
        format!("{g}{}", self.n_classes)
    }

    pub fn class_names(&self) -> Vec<String> {
        let names: Vec<&str> = match self.n_classes {
            6 => LaughterLabel::ALL.iter().map(|l| l.token()).collect(),
            3 => vec!["W", "SL", "L"],
            _ => vec!["W", "L"],
        };
        names.into_iter().map(String::from).collect()
    }

    /// Class id of a stored label: a fine unit label, or a turn class token.
    pub fn class_of(&self, label: &str) -> Option<usize> {
        let fine = label.parse::<LaughterLabel>().ok();
        let coarse = match label {
            "W" => Some(SuperClass::W),
            "SL" => Some(SuperClass::SL),
            "L" => Some(SuperClass::L),
            _ => fine.map(LaughterLabel::super_class),
        }?;
        match self.n_classes {
            6 => fine.map(|l| {
                LaughterLabel::ALL
                    .iter()
                    .position(|&x| x == l)
                    .expect("listed label")
            }),
            3 => Some(coarse as usize),
            _ => Some(usize::from(coarse != SuperClass::W)),
        }
    }

    fn caps_by_class(&self) -> Vec<Option<usize>> {
        self.class_names()
            .iter()
            .map(|c| self.balance_limits.get(c).copied())
            .collect()
    }
}

/// A segment that could not be turned into a feature vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedSegment {
    pub segment_id: String,
    pub reason: String,
}

/// Feature vectors for every unit (word level) or turn (turn level), in
/// corpus order. The label column holds the unit label or the turn class.
pub fn build_feature_table(
    corpus: &Corpus,
    granularity: Granularity,
    cfg: &FrameConfig,
) -> Result<(FeatureTable, Vec<SkippedSegment>)> {
    let analyzer = Analyzer::new(cfg.clone()).map_err(FeatureError::from)?;
    let per_turn: Vec<Result<Vec<Result<FeatureRow, SkippedSegment>>>> = corpus
        .turns
        .par_iter()
        .map(|turn| {
            let audio = corpus.turn_audio(turn)?;
            let jobs: Vec<(String, Option<_>, String)> = match granularity {
                Granularity::Turn => {
                    vec![(turn.turn_id.clone(), None, turn.class().token().to_string())]
                }
                Granularity::Word => turn
                    .units
                    .iter()
                    .map(|u| (u.segment_id(), Some(u.span), u.laughter.token().to_string()))
                    .collect(),
            };
            Ok(jobs
                .into_iter()
                .map(|(id, span, label)| {
                    let skip = |reason: String| SkippedSegment {
                        segment_id: id.clone(),
                        reason,
                    };
                    let segment = segment_from_audio(id.clone(), &audio, span)
                        .map_err(|e| skip(e.to_string()))?;
                    let fv = assemble_with(&analyzer, &segment).map_err(|e| skip(e.to_string()))?;
                    Ok(FeatureRow {
                        segment_id: id.clone(),
                        speaker_id: turn.speaker_id.clone(),
                        label,
                        values: fv.values,
                    })
                })
                .collect())
        })
        .collect();

    let mut table = FeatureTable::default();
    let mut skipped = Vec::new();
    for turn in per_turn {
        for row in turn? {
            match row {
                Ok(r) => table.rows.push(r),
                Err(s) => {
                    log::warn!("skipping {}: {}", s.segment_id, s.reason);
                    skipped.push(s);
                }
            }
        }
    }
    Ok((table, skipped))
}

/// Labelled instances for one task.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub class_names: Vec<String>,
    pub segment_ids: Vec<String>,
    pub speakers: Vec<String>,
    pub labels: Vec<usize>,
    pub features: Vec<Vec<f64>>,
    pub skipped: Vec<SkippedSegment>,
}

impl Dataset {
    pub fn from_table(
        table: &FeatureTable,
        task: &TaskConfig,
        skipped: Vec<SkippedSegment>,
    ) -> Result<Self> {
        let mut d = Dataset {
            class_names: task.class_names(),
            segment_ids: Vec::with_capacity(table.len()),
            speakers: Vec::with_capacity(table.len()),
            labels: Vec::with_capacity(table.len()),
            features: Vec::with_capacity(table.len()),
            skipped,
        };
        for row in &table.rows {
            let class = task
                .class_of(&row.label)
                .ok_or_else(|| HarnessError::UnknownLabel {
                    segment: row.segment_id.clone(),
                    label: row.label.clone(),
                })?;
            d.segment_ids.push(row.segment_id.clone());
            d.speakers.push(row.speaker_id.clone());
            d.labels.push(class);
            d.features.push(row.values.clone());
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.class_names.len()];
        for &l in &self.labels {
            c[l] += 1;
        }
        c
    }

    /// Copy with the labels shuffled across instances.
    pub fn with_permuted_labels(&self, seed: u64) -> Self {
        let mut d = self.clone();
        d.labels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        d
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fold {
    pub index: usize,
    pub test_speaker: String,
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// One fold per distinct speaker, ordered by speaker id. `speakers[i]` is
/// the speaker of instance `i`.
pub fn make_loso_folds<S: AsRef<str>>(speakers: &[S]) -> Result<Vec<Fold>> {
    let ids: BTreeSet<&str> = speakers.iter().map(AsRef::as_ref).collect();
    if ids.len() < 2 {
        return Err(HarnessError::TooFewSpeakers(ids.len()));
    }
    Ok(ids
        .into_iter()
        .enumerate()
        .map(|(index, s)| {
            let (test, train): (Vec<usize>, Vec<usize>) =
                (0..speakers.len()).partition(|&i| speakers[i].as_ref() == s);
            Fold {
                index,
                test_speaker: s.to_string(),
                train,
                test,
            }
        })
        .collect())
}

/// Folds over a corpus's turns, one per speaker with at least one turn.
pub fn corpus_folds(corpus: &Corpus) -> Result<Vec<Fold>> {
    let speakers: Vec<&str> = corpus.turns.iter().map(|t| t.speaker_id.as_str()).collect();
    make_loso_folds(&speakers)
}

/// Subsamples the capped classes to exactly their cap, uniformly without
/// replacement. `members` are instance ids, `labels[i]` the class of
/// `members[i]`. Returns the kept instance ids in their original order.
pub fn balance_training_set(
    members: &[usize],
    labels: &[usize],
    caps: &[Option<usize>],
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let n_classes = caps
        .len()
        .max(labels.iter().map(|&l| l + 1).max().unwrap_or(0));
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (pos, &l) in labels.iter().enumerate() {
        by_class[l].push(pos);
    }
    let mut keep = vec![false; members.len()];
    for (class, positions) in by_class.iter().enumerate() {
        match caps.get(class).copied().flatten() {
            Some(cap) if positions.len() > cap => {
                for k in sample(rng, positions.len(), cap) {
                    keep[positions[k]] = true;
                }
            }
            _ => positions.iter().for_each(|&p| keep[p] = true),
        }
    }
    members
        .iter()
        .zip(keep)
        .filter_map(|(&m, k)| k.then_some(m))
        .collect()
}

/// RNG for balancing fold `stream`; the pooled selection uses its own stream.
pub fn balance_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Balancing stream for selection or training on the pooled data.
pub const POOLED_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub classes: Vec<String>,
    /// `counts[true][predicted]`.
    pub counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(classes: Vec<String>) -> Self {
        let n = classes.len();
        Self {
            classes,
            counts: vec![vec![0; n]; n],
        }
    }

    pub fn from_counts(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Self {
        Self { classes, counts }
    }

    pub fn add(&mut self, truth: usize, predicted: usize) {
        self.counts[truth][predicted] += 1;
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    /// Rows as true class, columns as predicted, with count and recall.
    pub fn render(&self) -> String {
        let mut s = String::from("class. as");
        for c in &self.classes {
            write!(s, "\t{c}").unwrap();
        }
        s.push_str("\t#\t% corr.\n");
        for (i, row) in self.counts.iter().enumerate() {
            write!(s, "{}", self.classes[i]).unwrap();
            for v in row {
                write!(s, "\t{v}").unwrap();
            }
            let n: u64 = row.iter().sum();
            let recall = if n == 0 {
                "-".to_string()
            } else {
                format!("{:.1}", 100.0 * row[i] as f64 / n as f64)
            };
            writeln!(s, "\t{n}\t{recall}").unwrap();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    /// Weighted average recall: trace / total.
    pub wa: f64,
    /// Unweighted average recall over classes with at least one instance.
    pub ua: f64,
    /// Recall per class; `None` for classes without instances.
    pub recalls: Vec<Option<f64>>,
}

pub fn score_confusions(matrix: &ConfusionMatrix) -> Result<Scores> {
    let total = matrix.total();
    if total == 0 {
        return Err(HarnessError::EmptyMatrix);
    }
    let trace: u64 = (0..matrix.counts.len()).map(|i| matrix.counts[i][i]).sum();
    let recalls: Vec<Option<f64>> = matrix
        .counts
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let n: u64 = row.iter().sum();
            (n > 0).then(|| row[i] as f64 / n as f64)
        })
        .collect();
    for (c, r) in matrix.classes.iter().zip(&recalls) {
        if r.is_none() {
            log::warn!("class {c} has no instances; left out of UA");
        }
    }
    let present: Vec<f64> = recalls.iter().flatten().copied().collect();
    Ok(Scores {
        wa: trace as f64 / total as f64,
        ua: present.iter().sum::<f64>() / present.len() as f64,
        recalls,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub index: usize,
    pub test_speaker: String,
    pub test_instances: usize,
    /// Balanced training counts per class.
    pub train_counts: Vec<usize>,
    /// Per-fold CFS selection (FSc only).
    pub selected: Option<Vec<usize>>,
    pub selection_merit: Option<f64>,
    pub features_used: usize,
    /// SHA-256 of the trained model's text form.
    pub model_hash: Option<String>,
    pub matrix: ConfusionMatrix,
    /// Majority class of the balanced training set.
    pub majority_class: Option<usize>,
    /// Why the fold was not evaluated.
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: String,
    pub regime: Regime,
    pub seed: u64,
    /// Set for FSf, whose selection sees the test speakers.
    pub note: Option<String>,
    pub class_names: Vec<String>,
    pub pooled: ConfusionMatrix,
    pub scores: Scores,
    /// Always predicting each fold's majority training class.
    pub baseline: Scores,
    pub folds: Vec<FoldReport>,
    /// Features selected in every fold (FSc).
    pub intersection: Option<Vec<usize>>,
    /// Selection on the pooled data (FSf).
    pub pooled_selection: Option<Vec<usize>>,
    pub feature_names: Vec<String>,
    pub skipped_segments: Vec<SkippedSegment>,
}

impl EvalReport {
    /// Percent WA with UA in parentheses, the layout of the results overview.
    pub fn wa_ua(&self) -> String {
        format!(
            "{:.1} ({:.1})",
            100.0 * self.scores.wa,
            100.0 * self.scores.ua
        )
    }

    pub fn render_table(&self) -> String {
        let n_features = match (&self.intersection, &self.pooled_selection) {
            (Some(s), _) | (_, Some(s)) => s.len().to_string(),
            _ => "all".to_string(),
        };
        let mut s = String::new();
        writeln!(s, "[% WA (UA)]\tN_cl\tDummy\t{}\tN_ft", self.regime).unwrap();
        writeln!(
            s,
            "{}\t{}\t{:.1} ({:.1})\t{}\t{}",
            self.task,
            self.class_names.len(),
            100.0 * self.baseline.wa,
            100.0 * self.baseline.ua,
            self.wa_ua(),
            n_features
        )
        .unwrap();
        if let Some(note) = &self.note {
            writeln!(s, "note: {note}").unwrap();
        }
        s.push('\n');
        s.push_str(&self.pooled.render());
        let skipped: Vec<&FoldReport> = self.folds.iter().filter(|f| f.skipped.is_some()).collect();
        for f in skipped {
            writeln!(
                s,
                "fold {} ({}) skipped: {}",
                f.index,
                f.test_speaker,
                f.skipped.as_deref().unwrap_or("")
            )
            .unwrap();
        }
        if !self.skipped_segments.is_empty() {
            writeln!(s, "{} segments skipped", self.skipped_segments.len()).unwrap();
        }
        s
    }
}

pub fn model_hash(model: &SvmModel) -> String {
    hex::encode(Sha256::digest(model.to_text().as_bytes()))
}

fn columns(rows: &[Vec<f64>], ids: &[usize], cols: Option<&[usize]>) -> Vec<Vec<f64>> {
    ids.iter()
        .map(|&i| match cols {
            Some(c) => c.iter().map(|&j| rows[i][j]).collect(),
            None => rows[i].clone(),
        })
        .collect()
}

/// A fold's balanced training instances, or why the fold cannot be
/// evaluated (a class present in the data is missing after balancing).
/// Depends only on the training speakers' labels, the caps and the seed.
pub fn balanced_training(
    data: &Dataset,
    task: &TaskConfig,
    fold: &Fold,
) -> (Vec<usize>, Option<String>) {
    let labels: Vec<usize> = fold.train.iter().map(|&i| data.labels[i]).collect();
    let mut rng = balance_rng(task.seed, fold.index as u64);
    let balanced = balance_training_set(&fold.train, &labels, &task.caps_by_class(), &mut rng);
    let present: BTreeSet<usize> = data.labels.iter().copied().collect();
    let in_train: BTreeSet<usize> = balanced.iter().map(|&i| data.labels[i]).collect();
    let missing: Vec<&str> = present
        .difference(&in_train)
        .map(|&c| data.class_names[c].as_str())
        .collect();
    let reason =
        (!missing.is_empty()).then(|| format!("training set lacks class {}", missing.join(", ")));
    (balanced, reason)
}

/// Standardizer and one-vs-one SVM fitted on `train` only, restricted to
/// `features` when given.
pub fn train_fold_model(
    data: &Dataset,
    task: &TaskConfig,
    train: &[usize],
    features: Option<&[usize]>,
) -> Result<SvmModel> {
    let x = columns(&data.features, train, features);
    let y: Vec<usize> = train.iter().map(|&i| data.labels[i]).collect();
    Ok(SvmModel::fit(&x, &y, &data.class_names, &task.smo)?)
}

struct Prepared {
    fold: Fold,
    balanced: Vec<usize>,
    missing_class: Option<String>,
}

/// Runs the full protocol on an extracted data set.
pub fn run_experiment(data: &Dataset, task: &TaskConfig) -> Result<EvalReport> {
    let folds = make_loso_folds(&data.speakers)?;
    let caps = task.caps_by_class();
    let n_classes = data.class_names.len();

    let prepared: Vec<Prepared> = folds
        .into_iter()
        .map(|fold| {
            let (balanced, missing_class) = balanced_training(data, task, &fold);
            if let Some(m) = &missing_class {
                log::warn!("fold {} ({}): {m}", fold.index, fold.test_speaker);
            }
            Prepared {
                fold,
                balanced,
                missing_class,
            }
        })
        .collect();

    // feature selection
    let per_fold_selection: Vec<Option<crate::cfs::SelectionResult>> = match task.regime {
        Regime::FsC => prepared
            .par_iter()
            .map(|p| {
                if p.missing_class.is_some() {
                    return Ok(None);
                }
                let x = columns(&data.features, &p.balanced, None);
                let y: Vec<usize> = p.balanced.iter().map(|&i| data.labels[i]).collect();
                let sel = best_first_select(&x, &y, task.stall_limit)?;
                log::info!(
                    "fold {}: {} features selected",
                    p.fold.index,
                    sel.selected.len()
                );
                Ok(Some(sel))
            })
            .collect::<Result<_>>()?,
        _ => prepared.iter().map(|_| None).collect(),
    };
    let intersection = match task.regime {
        Regime::FsC => {
            let sets: Vec<&[usize]> = per_fold_selection
                .iter()
                .flatten()
                .map(|s| s.selected.as_slice())
                .collect();
            let inter = intersect_fold_selections(&sets);
            log::info!(
                "{} features selected in all {} folds",
                inter.len(),
                sets.len()
            );
            if inter.is_empty() {
                return Err(HarnessError::EmptyIntersection);
            }
            Some(inter)
        }
        _ => None,
    };
    let pooled_selection = match task.regime {
        Regime::FsF => {
            let all: Vec<usize> = (0..data.len()).collect();
            let kept = balance_training_set(
                &all,
                &data.labels,
                &caps,
                &mut balance_rng(task.seed, POOLED_STREAM),
            );
            let x = columns(&data.features, &kept, None);
            let y: Vec<usize> = kept.iter().map(|&i| data.labels[i]).collect();
            let sel = best_first_select(&x, &y, task.stall_limit)?;
            if sel.selected.is_empty() {
                return Err(HarnessError::EmptyIntersection);
            }
            Some(sel.selected)
        }
        _ => None,
    };
    let chosen: Option<&[usize]> = intersection.as_deref().or(pooled_selection.as_deref());

    let fold_reports: Vec<FoldReport> = prepared
        .par_iter()
        .zip(per_fold_selection.par_iter())
        .map(|(p, sel)| {
            let mut matrix = ConfusionMatrix::new(data.class_names.clone());
            let mut train_counts = vec![0; n_classes];
            for &i in &p.balanced {
                train_counts[data.labels[i]] += 1;
            }
            let mut report = FoldReport {
                index: p.fold.index,
                test_speaker: p.fold.test_speaker.clone(),
                test_instances: p.fold.test.len(),
                train_counts: train_counts.clone(),
                selected: sel.as_ref().map(|s| s.selected.clone()),
                selection_merit: sel.as_ref().map(|s| s.merit),
                features_used: chosen
                    .map_or(data.features.first().map_or(0, Vec::len), <[usize]>::len),
                model_hash: None,
                matrix: matrix.clone(),
                majority_class: None,
                skipped: p.missing_class.clone(),
            };
            if p.missing_class.is_some() || p.balanced.is_empty() {
                return Ok(report);
            }
            let model = train_fold_model(data, task, &p.balanced, chosen)?;
            for (&i, row) in p
                .fold
                .test
                .iter()
                .zip(columns(&data.features, &p.fold.test, chosen))
            {
                matrix.add(data.labels[i], model.predict(&row)?);
            }
            report.model_hash = Some(model_hash(&model));
            report.matrix = matrix;
            // first class with the largest count
            report.majority_class = (0..n_classes).rev().max_by_key(|&c| train_counts[c]);
            Ok(report)
        })
        .collect::<Result<_>>()?;

    let mut pooled = ConfusionMatrix::new(data.class_names.clone());
    let mut baseline = ConfusionMatrix::new(data.class_names.clone());
    for f in fold_reports.iter().filter(|f| f.skipped.is_none()) {
        pooled.merge(&f.matrix);
        let majority = f.majority_class.expect("evaluated fold");
        for (truth, row) in f.matrix.counts.iter().enumerate() {
            baseline.counts[truth][majority] += row.iter().sum::<u64>();
        }
    }
    if pooled.total() == 0 {
        return Err(HarnessError::NoUsableFold);
    }
    let names = |set: &Option<Vec<usize>>| -> Vec<String> {
        set.iter()
            .flatten()
            .map(|&i| feature_name(i).map_or_else(|_| format!("feature_{i}"), str::to_string))
            .collect()
    };
    let feature_names = if intersection.is_some() {
        names(&intersection)
    } else {
        names(&pooled_selection)
    };

    Ok(EvalReport {
        task: task.task_name(),
        regime: task.regime,
        seed: task.seed,
        note: (task.regime == Regime::FsF)
            .then(|| "diagnostic, leaky: selection saw the test speakers".to_string()),
        class_names: data.class_names.clone(),
        scores: score_confusions(&pooled)?,
        baseline: score_confusions(&baseline)?,
        pooled,
        folds: fold_reports,
        intersection,
        pooled_selection,
        feature_names,
        skipped_segments: data.skipped.clone(),
    })
}

/// Extraction plus [`run_experiment`].
pub fn run_on_corpus(corpus: &Corpus, task: &TaskConfig, cfg: &FrameConfig) -> Result<EvalReport> {
    let (table, skipped) = build_feature_table(corpus, task.granularity, cfg)?;
    run_experiment(&Dataset::from_table(&table, task, skipped)?, task)
}

/// Results-overview layout for several reports: one row per task, one
/// column per regime.
pub fn render_overview(reports: &[EvalReport]) -> String {
    let regimes: Vec<Regime> = [Regime::FsN, Regime::FsC, Regime::FsF]
        .into_iter()
        .filter(|r| reports.iter().any(|x| x.regime == *r))
        .collect();
    let tasks: BTreeSet<&str> = reports.iter().map(|r| r.task.as_str()).collect();
    let mut s = String::from("[% WA (UA)]");
    for r in &regimes {
        write!(s, "\t{r}").unwrap();
    }
    s.push('\n');
    for t in tasks {
        s.push_str(t);
        for r in &regimes {
            let cell = reports
                .iter()
                .find(|x| x.task == t && x.regime == *r)
                .map_or_else(|| "-".to_string(), EvalReport::wa_ua);
            write!(s, "\t{cell}").unwrap();
        }
        s.push('\n');
    }
    s
}

impl From<DspError> for HarnessError {
    fn from(e: DspError) -> Self {
        HarnessError::Feature(FeatureError::Dsp(e))
    }
}
