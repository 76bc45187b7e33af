use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{DspError, FrameConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WindowKind {
    Hamming,
    Hann,
    Rectangular,
}

pub fn window_coefficients(kind: WindowKind, len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    let denom = (len - 1) as f64;
    (0..len)
        .map(|i| {
            let phase = 2.0 * PI * i as f64 / denom;
            match kind {
                WindowKind::Hamming => 0.54 - 0.46 * phase.cos(),
                WindowKind::Hann => 0.5 - 0.5 * phase.cos(),
                WindowKind::Rectangular => 1.0,
            }
        })
        .collect()
}

/// Number of full frames in `len` samples, 0 if not even one fits.
pub fn frame_count(len: usize, cfg: &FrameConfig) -> usize {
    if len < cfg.frame_length {
        0
    } else {
        (len - cfg.frame_length) / cfg.hop + 1
    }
}

/// Raw (unwindowed) frames. Windowing is applied later, only by the
/// spectral and cepstral descriptors.
pub fn frame_signal<'a>(samples: &'a [f64], cfg: &FrameConfig) -> Result<Vec<&'a [f64]>, DspError> {
    let n = frame_count(samples.len(), cfg);
    if n == 0 {
        return Err(DspError::ShortSegment {
            len: samples.len(),
            min: cfg.frame_length,
        });
    }
    Ok((0..n)
        .map(|i| &samples[i * cfg.hop..i * cfg.hop + cfg.frame_length])
        .collect())
}
