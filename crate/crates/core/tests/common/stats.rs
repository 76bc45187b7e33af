//! Statistics oracles and fixtures.

use laughkit::corpus::{EmotionLabel, LaughterLabel, SampleSpan, WordUnit};
use laughkit::stats::{mann_whitney_with, Method};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two-sided exact p by listing every way to assign the pooled ranks to
/// the first sample.
pub fn enumerate_mann_whitney_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let na = a.len();
    let u_of = |mask: u32| {
        let mut u = 0.0;
        for i in 0..n {
            if mask & (1 << i) != 0 {
                for j in 0..n {
                    if mask & (1 << j) == 0 && pooled[j] < pooled[i] {
                        u += 1.0;
                    }
                }
            }
        }
        u
    };
    let observed = u_of((1u32 << na) - 1);
    let (mut le, mut ge, mut total) = (0u64, 0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != na {
            continue;
        }
        let u = u_of(mask);
        total += 1;
        if u <= observed {
            le += 1;
        }
        if u >= observed {
            ge += 1;
        }
    }
    (2.0 * le.min(ge) as f64 / total as f64).min(1.0)
}

pub fn distinct_sample(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    // distinct by construction: a shuffled grid with jitter
    let mut v: Vec<f64> = (0..n).map(|i| i as f64 + rng.gen_range(0.0..0.5)).collect();
    v.shuffle(rng);
    v
}

/// Largest |exact − approximate| p over tie-free 6+6 splits of random
/// size-30 draws.
pub fn exact_vs_normal_max_gap(seeds: u64) -> f64 {
    let mut worst = 0.0f64;
    for seed in 0..seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<f64> = (0..30).map(|_| rng.gen_range(0.0..100.0)).collect();
        let mut idx: Vec<usize> = (0..30).collect();
        idx.shuffle(&mut rng);
        let a: Vec<f64> = idx[..6].iter().map(|&i| data[i]).collect();
        let b: Vec<f64> = idx[6..12].iter().map(|&i| data[i]).collect();
        let exact = mann_whitney_with(&a, &b, Method::Exact).unwrap().p_value;
        let approx = mann_whitney_with(&a, &b, Method::NormalApprox)
            .unwrap()
            .p_value;
        worst = worst.max((exact - approx).abs());
    }
    worst
}

pub fn speech_laugh_emotion_units() -> Vec<WordUnit> {
    let rows = [
        (EmotionLabel::Mixed, 8, 8),
        (EmotionLabel::Angry, 1, 1),
        (EmotionLabel::Joyful, 25, 24),
        (EmotionLabel::Neutral, 10, 21),
    ];
    let mut units = Vec::new();
    let mut index = 0;
    for (emotion, sls, slw) in rows {
        for (label, n) in [(LaughterLabel::SLs, sls), (LaughterLabel::SLw, slw)] {
            for _ in 0..n {
                units.push(WordUnit {
                    turn_id: "t".into(),
                    index,
                    span: SampleSpan::new(index * 1000, index * 1000 + 800),
                    laughter: label,
                    emotion: Some(emotion),
                    syntactic_position: None,
                    transcript: None,
                });
                index += 1;
            }
        }
    }
    units
}
