//! The default synthetic corpus, extracted once per test binary.

use std::sync::OnceLock;

use laughkit::corpus::{synthesize_corpus, SynthConfig};
use laughkit::featureset::FeatureTable;
use laughkit::harness::{
    balanced_training, build_feature_table, make_loso_folds, model_hash, run_experiment,
    train_fold_model, Dataset, EvalReport, Granularity, Regime, SkippedSegment, TaskConfig,
};
use laughkit::FrameConfig;

pub const CORPUS_SEED: u64 = 0;

/// Word-level feature table of the default 20-speaker corpus.
pub fn word_table() -> &'static (FeatureTable, Vec<SkippedSegment>) {
    static TABLE: OnceLock<(FeatureTable, Vec<SkippedSegment>)> = OnceLock::new();
    TABLE.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let corpus = synthesize_corpus(&SynthConfig::default(), CORPUS_SEED, dir.path()).unwrap();
        build_feature_table(&corpus, Granularity::Word, &FrameConfig::default()).unwrap()
    })
}

pub fn word2_task(regime: Regime, seed: u64) -> TaskConfig {
    TaskConfig::from_task_name("word2", regime, seed).unwrap()
}

pub fn word2_dataset() -> Dataset {
    let (table, skipped) = word_table();
    Dataset::from_table(table, &word2_task(Regime::FsN, 0), skipped.clone()).unwrap()
}

pub fn word2_report(seed: u64) -> EvalReport {
    run_experiment(&word2_dataset(), &word2_task(Regime::FsN, seed)).unwrap()
}

/// UA per seed with the labels shuffled across instances.
pub fn permuted_uas(seeds: u64) -> Vec<f64> {
    let data = word2_dataset();
    (0..seeds)
        .map(|seed| {
            run_experiment(
                &data.with_permuted_labels(1000 + seed),
                &word2_task(Regime::FsN, seed),
            )
            .unwrap()
            .scores
            .ua
        })
        .collect()
}

fn altered_for(data: &Dataset, speaker: &str) -> Dataset {
    let mut altered = data.clone();
    for i in 0..altered.len() {
        if altered.speakers[i] == speaker {
            altered.features[i]
                .iter_mut()
                .for_each(|v| *v = -3.0 * *v + 7.0);
            altered.labels[i] = 1 - altered.labels[i];
        }
    }
    altered
}

/// Folds whose model hash changes when the held-out speaker's features and
/// labels are altered. Must be empty. Each fold is retrained through the
/// same balancing and training steps the experiment uses, and one fold is
/// also checked through a full experiment rerun.
pub fn leaking_folds() -> Vec<String> {
    let data = word2_dataset();
    let task = word2_task(Regime::FsN, 0);
    let base = run_experiment(&data, &task).unwrap();
    let mut leaks = Vec::new();
    for fold in make_loso_folds(&data.speakers).unwrap() {
        let altered = altered_for(&data, &fold.test_speaker);
        let hash = |d: &Dataset| {
            let (train, skip) = balanced_training(d, &task, &fold);
            skip.is_none()
                .then(|| model_hash(&train_fold_model(d, &task, &train, None).unwrap()))
        };
        let reported = &base.folds[fold.index].model_hash;
        if hash(&data) != *reported || hash(&altered) != *reported {
            leaks.push(fold.test_speaker.clone());
        }
    }
    let first = &base.folds[0];
    let rerun = run_experiment(&altered_for(&data, &first.test_speaker), &task).unwrap();
    if rerun.folds[0].model_hash != first.model_hash {
        leaks.push(format!("{} (full rerun)", first.test_speaker));
    }
    leaks
}
