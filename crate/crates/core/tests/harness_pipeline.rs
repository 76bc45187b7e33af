mod common;

use std::collections::BTreeMap;

use common::pipeline::*;
use laughkit::harness::*;
use laughkit::NUM_FEATURES;

#[test]
fn loso_on_default_corpus() {
    let (table, skipped) = word_table();
    assert!(skipped.is_empty(), "{skipped:?}");
    assert_eq!(table.rows.len(), 20 * 13);
    assert!(table.rows.iter().all(|r| r.values.len() == NUM_FEATURES));
    let report = word2_report(0);
    println!("{}", report.render_table());
    assert_eq!(report.folds.len(), 20);
    assert!(report.scores.ua >= 0.85, "UA {}", report.scores.ua);
    assert_eq!(report.pooled.total(), 260);
}

#[test]
fn report_is_deterministic() {
    let a = word2_report(3);
    let b = word2_report(3);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn permuted_labels_fall_to_chance() {
    let uas = permuted_uas(5);
    let mean = uas.iter().sum::<f64>() / uas.len() as f64;
    println!("permuted UA per seed {uas:?}, mean {mean}");
    assert!((0.45..=0.55).contains(&mean), "{mean}");
}

#[test]
fn test_speaker_cannot_change_its_model() {
    assert!(leaking_folds().is_empty());
}

#[test]
fn folds_hold_out_exactly_one_speaker() {
    let data = word2_dataset();
    let folds = make_loso_folds(&data.speakers).unwrap();
    assert_eq!(folds.len(), 20);
    for f in &folds {
        assert!(f.train.iter().all(|&i| data.speakers[i] != f.test_speaker));
        assert!(f.test.iter().all(|&i| data.speakers[i] == f.test_speaker));
    }
}

/// Labels with `n` instances of each class count.
fn labels(counts: &[usize]) -> Vec<usize> {
    counts
        .iter()
        .enumerate()
        .flat_map(|(c, &n)| std::iter::repeat_n(c, n))
        .collect()
}

fn balanced_counts(task: &str, counts: &[usize], seed: u64) -> Vec<usize> {
    let t = TaskConfig::from_task_name(task, Regime::FsN, seed).unwrap();
    let caps: Vec<Option<usize>> = t
        .class_names()
        .iter()
        .map(|c| t.balance_limits.get(c).copied())
        .collect();
    let y = labels(counts);
    let members: Vec<usize> = (0..y.len()).collect();
    let kept = balance_training_set(&members, &y, &caps, &mut balance_rng(seed, 0));
    let mut out = vec![0; counts.len()];
    kept.iter().for_each(|&i| out[y[i]] += 1);
    out
}

#[test]
fn balancing_hits_the_caps() {
    assert_eq!(
        balanced_counts("word6", &[700, 60, 40, 50, 70, 30], 1),
        vec![100, 60, 40, 50, 70, 30]
    );
    assert_eq!(balanced_counts("word2", &[700, 274], 1), vec![300, 274]);
    assert_eq!(
        balanced_counts("word3", &[700, 98, 176], 1),
        vec![300, 98, 176]
    );
    assert_eq!(balanced_counts("turn2", &[13494, 237], 1), vec![237, 237]);
    assert_eq!(
        balanced_counts("turn3", &[13494, 200, 172], 1),
        vec![150, 150, 172]
    );
}

#[test]
fn balancing_is_seeded() {
    let t = TaskConfig::from_task_name("word2", Regime::FsN, 0).unwrap();
    let caps = vec![t.balance_limits.get("W").copied(), None];
    let y = labels(&[700, 274]);
    let members: Vec<usize> = (0..y.len()).collect();
    let draw =
        |seed, stream| balance_training_set(&members, &y, &caps, &mut balance_rng(seed, stream));
    assert_eq!(draw(4, 2), draw(4, 2));
    assert_ne!(draw(4, 2), draw(5, 2));
    assert_ne!(draw(4, 2), draw(4, 3));
}

#[test]
fn selection_regimes_run() {
    let data = word2_dataset();
    let fsc = run_experiment(&data, &word2_task(Regime::FsC, 0)).unwrap();
    let inter = fsc.intersection.clone().unwrap();
    assert!(!inter.is_empty());
    for f in fsc.folds.iter().filter(|f| f.skipped.is_none()) {
        let sel = f.selected.as_ref().unwrap();
        assert!(inter.iter().all(|j| sel.contains(j)));
        assert_eq!(f.features_used, inter.len());
    }
    let sizes: BTreeMap<usize, usize> = fsc
        .folds
        .iter()
        .map(|f| (f.index, f.selected.as_ref().map_or(0, Vec::len)))
        .collect();
    println!(
        "per-fold selection sizes {sizes:?}, intersection {}",
        inter.len()
    );
    let fsf = run_experiment(&data, &word2_task(Regime::FsF, 0)).unwrap();
    assert!(fsf.note.as_deref().unwrap().contains("leaky"));
    assert!(fsf.pooled_selection.is_some());
    println!("{}", render_overview(&[word2_report(0), fsc, fsf]));
}
