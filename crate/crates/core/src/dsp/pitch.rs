use super::FrameConfig;

/// Autocorrelation pitch estimate for one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchResult {
    /// Hz, 0 when unvoiced.
    pub f0: f64,
    /// Fundamental period in samples (fractional after peak interpolation),
    /// 0 when no periodicity peak was found.
    pub t0: f64,
    /// `ACF(T0) / ACF(0)` clipped to `[0, 1]`.
    pub voicing_prob: f64,
    /// Zero-crossing rate of the ACF (per second) divided by F0; 0 when unvoiced.
    pub f0_quality: f64,
    /// dB, 0 when unvoiced.
    pub hnr: f64,
}

impl PitchResult {
    pub const UNVOICED: PitchResult = PitchResult {
        f0: 0.0,
        t0: 0.0,
        voicing_prob: 0.0,
        f0_quality: 0.0,
        hnr: 0.0,
    };

    pub fn is_voiced(&self) -> bool {
        self.f0 > 0.0
    }
}

/// A peak counts as the period candidate if it reaches this fraction of the
/// highest peak in the search range; the shortest such lag wins, which
/// keeps multiples of the period from being picked.
const PEAK_FRACTION: f64 = 0.9;
const HNR_LIMIT: f64 = 100.0;

/// Pitch from the normalized autocorrelation of a raw frame.
///
/// The period is searched over lags `sr/f0_max ..= sr/f0_min`. Frames that
/// cannot cover the longest lag, silent frames, and frames without a
/// periodicity peak above the voicing threshold are unvoiced.
pub fn acf_pitch(frame: &[f64], cfg: &FrameConfig) -> PitchResult {
    let sr = f64::from(cfg.sample_rate);
    let n = frame.len();
    let min_lag = (sr / cfg.f0_max).ceil() as usize;
    let max_lag = (sr / cfg.f0_min).floor() as usize;
    if n <= max_lag + 1 || min_lag < 1 {
        return PitchResult::UNVOICED;
    }

    let energy: f64 = frame.iter().map(|x| x * x).sum();
    if energy == 0.0 {
        return PitchResult::UNVOICED;
    }
    // each lag normalized by the energy of the two overlapping parts, so
    // r[0] = 1, |r| <= 1, and a periodic frame reaches 1 at its period even
    // when the lag covers most of the frame
    let mut head = vec![0.0; n + 1];
    for (i, x) in frame.iter().enumerate() {
        head[i + 1] = head[i] + x * x;
    }
    let r: Vec<f64> = (0..=max_lag + 1)
        .map(|lag| {
            let s: f64 = frame[..n - lag]
                .iter()
                .zip(&frame[lag..])
                .map(|(a, b)| a * b)
                .sum();
            let norm = (head[n - lag] * (energy - head[lag])).sqrt();
            if norm > 0.0 {
                s / norm
            } else {
                0.0
            }
        })
        .collect();

    let peaks: Vec<usize> = (min_lag..=max_lag)
        .filter(|&k| r[k] > r[k - 1] && r[k] >= r[k + 1])
        .collect();
    let Some(best) = peaks.iter().map(|&k| r[k]).reduce(f64::max) else {
        let k = (min_lag..=max_lag)
            .max_by(|&a, &b| r[a].total_cmp(&r[b]))
            .unwrap();
        return PitchResult {
            voicing_prob: r[k].clamp(0.0, 1.0),
            ..PitchResult::UNVOICED
        };
    };
    let lag = peaks
        .iter()
        .copied()
        .find(|&k| r[k] >= PEAK_FRACTION * best)
        .unwrap();
    let voicing_prob = r[lag].clamp(0.0, 1.0);
    if voicing_prob < cfg.voicing_threshold {
        return PitchResult {
            voicing_prob,
            ..PitchResult::UNVOICED
        };
    }

    // parabolic refinement of the peak position
    let (a, b, c) = (r[lag - 1], r[lag], r[lag + 1]);
    let curvature = a - 2.0 * b + c;
    let offset = if curvature < 0.0 {
        (0.5 * (a - c) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let t0 = lag as f64 + offset;
    let f0 = (sr / t0).clamp(cfg.f0_min, cfg.f0_max);

    let hnr = if voicing_prob >= 1.0 {
        HNR_LIMIT
    } else {
        (10.0 * (voicing_prob / (1.0 - voicing_prob)).log10()).clamp(-HNR_LIMIT, HNR_LIMIT)
    };
    let acf_crossings = r[..=max_lag]
        .windows(2)
        .filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0))
        .count();
    let acf_zcr = acf_crossings as f64 * sr / (max_lag + 1) as f64;

    PitchResult {
        f0,
        t0,
        voicing_prob,
        f0_quality: acf_zcr / f0,
        hnr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn sine(freq: f64) -> Vec<f64> {
        (0..400)
            .map(|i| (2.0 * PI * freq * i as f64 / 16_000.0 + 0.7).sin())
            .collect()
    }

    /// Direct argmax of the unbiased normalized ACF, no peak logic.
    fn oracle_f0(frame: &[f64], lo: usize, hi: usize) -> f64 {
        let n = frame.len();
        let acf = |lag: usize| {
            (0..n - lag).map(|i| frame[i] * frame[i + lag]).sum::<f64>() / (n - lag) as f64
        };
        let best = (lo..=hi)
            .max_by(|&a, &b| acf(a).total_cmp(&acf(b)))
            .unwrap();
        16_000.0 / best as f64
    }

    #[test]
    fn pure_tone_200hz() {
        let cfg = FrameConfig::default();
        let p = acf_pitch(&sine(200.0), &cfg);
        assert!((196.0..=204.0).contains(&p.f0), "{p:?}");
        assert!(p.voicing_prob > 0.9);
        assert!(p.hnr > 0.0);
        // restricted to one period so the oracle has a unique maximum
        let o = oracle_f0(&sine(200.0), 60, 100);
        assert!((p.f0 - o).abs() / o < 0.02);
    }

    #[test]
    fn white_noise_is_unvoiced() {
        let cfg = FrameConfig::default();
        let mut unvoiced = 0;
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let frame: Vec<f64> = (0..400).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let p = acf_pitch(&frame, &cfg);
            assert!((0.0..=1.0).contains(&p.voicing_prob));
            if p.f0 == 0.0 && p.voicing_prob < cfg.voicing_threshold {
                unvoiced += 1;
            }
        }
        assert!(unvoiced > 50, "{unvoiced}");
    }

    #[test]
    fn silence_is_unvoiced() {
        let p = acf_pitch(&[0.0; 400], &FrameConfig::default());
        assert_eq!(p, PitchResult::UNVOICED);
    }

    #[test]
    fn sine_f0_quality_is_two() {
        // ACF of a sine is a cosine at the same frequency: 2·f crossings/s
        let p = acf_pitch(&sine(250.0), &FrameConfig::default());
        assert!((p.f0_quality - 2.0).abs() < 0.2, "{p:?}");
    }
}
