use std::f64::consts::PI;

use super::{FrameConfig, LOG_FLOOR, NUM_MFCC};

fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Triangular filters equally spaced on the mel scale from 0 Hz to Nyquist,
/// applied to the power spectrum.
#[derive(Debug, Clone)]
pub struct MelFilterbank {
    /// `weights[m][k]`: weight of bin `k` in filter `m`.
    weights: Vec<Vec<f64>>,
}

impl MelFilterbank {
    pub fn new(cfg: &FrameConfig) -> Self {
        let bins = cfg.fft_size / 2 + 1;
        let n = cfg.mel_filters;
        let top = hz_to_mel(f64::from(cfg.sample_rate) / 2.0);
        let edges: Vec<f64> = (0..n + 2)
            .map(|i| mel_to_hz(top * i as f64 / (n + 1) as f64))
            .collect();
        let weights = (0..n)
            .map(|m| {
                let (lo, mid, hi) = (edges[m], edges[m + 1], edges[m + 2]);
                (0..bins)
                    .map(|k| {
                        let f = cfg.bin_frequency(k);
                        if f > lo && f <= mid {
                            (f - lo) / (mid - lo)
                        } else if f > mid && f < hi {
                            (hi - f) / (hi - mid)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Filter energies of a magnitude spectrum.
    pub fn energies(&self, magnitude: &[f64]) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| w.iter().zip(magnitude).map(|(w, m)| w * m * m).sum())
            .collect()
    }
}

/// MFCC 0–15 of a magnitude spectrum.
pub fn mfcc(magnitude: &[f64], filterbank: &MelFilterbank) -> [f64; NUM_MFCC] {
    mfcc_from_filterbank(&filterbank.energies(magnitude))
}

/// Orthonormal DCT-II of the floored log filter energies, first 16 terms.
pub fn mfcc_from_filterbank(energies: &[f64]) -> [f64; NUM_MFCC] {
    let m = energies.len();
    let logs: Vec<f64> = energies.iter().map(|e| e.max(LOG_FLOOR).ln()).collect();
    let mut out = [0.0; NUM_MFCC];
    for (k, c) in out.iter_mut().enumerate() {
        let scale = if k == 0 {
            (1.0 / m as f64).sqrt()
        } else {
            (2.0 / m as f64).sqrt()
        };
        *c = scale
            * logs
                .iter()
                .enumerate()
                .map(|(i, l)| l * (PI * k as f64 * (i as f64 + 0.5) / m as f64).cos())
                .sum::<f64>();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_energies() {
        let e = 3.7;
        let c = mfcc_from_filterbank(&[e; 26]);
        assert!((c[0] - 26f64.sqrt() * e.ln()).abs() < 1e-12);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn zero_spectrum_uses_floor() {
        let fb = MelFilterbank::new(&FrameConfig::default());
        let c = mfcc(&[0.0; 257], &fb);
        assert!((c[0] - 26f64.sqrt() * LOG_FLOOR.ln()).abs() < 1e-9);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn every_filter_covers_a_bin() {
        let fb = MelFilterbank::new(&FrameConfig::default());
        assert_eq!(fb.len(), 26);
        for w in &fb.weights {
            assert!(w.iter().any(|&v| v > 0.0));
        }
    }
}
