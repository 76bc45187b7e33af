//! Direct CFS merit and generated selection fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two-pass Pearson correlation; zero when either column is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa <= 1e-24 * n * (1.0 + ma * ma) || sbb <= 1e-24 * n * (1.0 + mb * mb) {
        return 0.0;
    }
    sab / (saa * sbb).sqrt()
}

pub fn column(x: &[Vec<f64>], j: usize) -> Vec<f64> {
    x.iter().map(|r| r[j]).collect()
}

/// Mean over classes of |corr(feature, one-vs-rest indicator)|.
pub fn class_corr(x: &[Vec<f64>], y: &[usize], j: usize) -> f64 {
    let col = column(x, j);
    let classes: std::collections::BTreeSet<usize> = y.iter().copied().collect();
    let total: f64 = classes
        .iter()
        .map(|&c| {
            let ind: Vec<f64> = y.iter().map(|&l| f64::from(u8::from(l == c))).collect();
            pearson(&col, &ind).abs()
        })
        .sum();
    total / classes.len() as f64
}

/// Merit straight from the definition: k·mean r_cf / sqrt(k + k(k−1)·mean r_ff).
pub fn direct_merit(x: &[Vec<f64>], y: &[usize], subset: &[usize]) -> f64 {
    let k = subset.len() as f64;
    let rcf = subset.iter().map(|&j| class_corr(x, y, j)).sum::<f64>() / k;
    let mut pairs = Vec::new();
    for (i, &a) in subset.iter().enumerate() {
        for &b in &subset[i + 1..] {
            pairs.push(pearson(&column(x, a), &column(x, b)).abs());
        }
    }
    let rff = if pairs.is_empty() {
        0.0
    } else {
        pairs.iter().sum::<f64>() / pairs.len() as f64
    };
    k * rcf / (k + k * (k - 1.0) * rff).sqrt()
}

pub fn random_dataset(
    seed: u64,
    n: usize,
    d: usize,
    classes: usize,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y: Vec<usize> = (0..n).map(|i| i % classes).collect();
    let x = y
        .iter()
        .map(|&c| {
            (0..d)
                .map(|j| {
                    rng.gen_range(-1.0..1.0)
                        + if j % 3 == 0 {
                            0.4 * c as f64 * (j + 1) as f64 / d as f64
                        } else {
                            0.0
                        }
                })
                .collect()
        })
        .collect();
    (x, y)
}

/// `informative` copies of the binary class indicator with small noise,
/// followed by `noise` pure-noise features.
pub fn planted_dataset(
    seed: u64,
    n: usize,
    informative: usize,
    noise: usize,
) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let x = y
        .iter()
        .map(|&c| {
            let mut row: Vec<f64> = (0..informative)
                .map(|_| c as f64 + rng.gen_range(-0.3..0.3))
                .collect();
            row.extend((0..noise).map(|_| rng.gen_range(-1.0..1.0)));
            row
        })
        .collect();
    (x, y)
}

/// Seeds (of `seeds`) on which best-first keeps at least two of the three
/// planted features among 50 noise features.
pub fn planted_recoveries(seeds: u64) -> usize {
    (0..seeds)
        .filter(|&seed| {
            let (x, y) = planted_dataset(seed, 200, 3, 50);
            let sel = laughkit::cfs::best_first_select(&x, &y, laughkit::cfs::DEFAULT_STALL_LIMIT)
                .unwrap();
            sel.selected.iter().filter(|&&j| j < 3).count() >= 2
        })
        .count()
}

/// Largest |library − direct| merit over every non-empty subset of `d`
/// features.
pub fn exhaustive_merit_gap(seed: u64, n: usize, d: usize, classes: usize) -> f64 {
    let (x, y) = random_dataset(seed, n, d, classes);
    let cache = laughkit::cfs::CorrelationCache::new(&x, &y).unwrap();
    let mut worst = 0.0f64;
    for mask in 1u32..(1 << d) {
        let subset: Vec<usize> = (0..d).filter(|&j| mask & (1 << j) != 0).collect();
        let got = laughkit::cfs::merit_score(&subset, &cache).unwrap();
        worst = worst.max((got - direct_merit(&x, &y, &subset)).abs());
    }
    worst
}

/// Best merit over all non-empty subsets, by enumeration.
pub fn exhaustive_best(x: &[Vec<f64>], y: &[usize]) -> (f64, Vec<usize>) {
    let d = x[0].len();
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for mask in 1u32..(1 << d) {
        let subset: Vec<usize> = (0..d).filter(|&j| mask & (1 << j) != 0).collect();
        let m = direct_merit(x, y, &subset);
        if m > best.0 {
            best = (m, subset);
        }
    }
    best
}

/// 51 random subsets of 0..100 that all contain 7 and 8.
pub fn forced_fold_sets(seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..51)
        .map(|_| {
            let mut s: Vec<usize> = (0..100).filter(|_| rng.gen_bool(0.5)).collect();
            s.extend([7, 8]);
            s.sort();
            s.dedup();
            s
        })
        .collect()
}
