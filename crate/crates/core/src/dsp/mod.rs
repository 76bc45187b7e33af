//! Frame-level acoustic descriptors.
//!
//! A segment is cut into frames with a fixed 10 ms hop. For every frame 39
//! base descriptors are measured:
//!
//! | rows  | group    | descriptors |
//! |-------|----------|-------------|
//! | 0–3   | time     | zero-crossing rate, max / min sample, offset |
//! | 4–5   | energy   | RMS, log energy |
//! | 6–9   | voice    | F0, voicing probability, F0 quality, HNR |
//! | 10–22 | spectral | band energies (0–250, 0–650, 250–650, 1k–4k Hz), roll-off 10/25/50/75/90 %, centroid, flux, relative position of spectral max / min |
//! | 23–38 | cepstral | MFCC 0–15 |
//!
//! Each base contour is followed by its first and second order regression
//! contours, giving a [`ContourMatrix`] of 117 rows ordered descriptor-major,
//! derivative-minor (`zcr_base, zcr_de, zcr_dede, max_sample_base, ...`).

mod delta;
mod frame;
mod mfcc;
mod pitch;
mod spectral;
mod time;

use std::fmt::Write as _;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::SignalSegment;

pub use delta::{delta_regression, DELTA_WINDOW};
pub use frame::{frame_count, frame_signal, window_coefficients, WindowKind};
pub use mfcc::{mfcc, mfcc_from_filterbank, MelFilterbank};
pub use pitch::{acf_pitch, PitchResult};
pub use spectral::{spectral_lld, SpectralDescriptors};
pub use time::{time_energy_lld, TimeEnergy};

/// Segments shorter than this (one 10 ms hop) are too short to analyse.
pub const MIN_SEGMENT_SAMPLES: usize = 160;
/// Required hop size in samples (10 ms at 16 kHz).
pub const HOP: usize = 160;
/// Floor applied before every logarithm.
pub const LOG_FLOOR: f64 = 1e-12;

pub const NUM_LLD: usize = 39;
pub const NUM_DERIVATIVES: usize = 3;
pub const NUM_CONTOURS: usize = NUM_LLD * NUM_DERIVATIVES;
pub const NUM_MFCC: usize = 16;

/// Base descriptor names, in row order.
pub const LLD_NAMES: [&str; NUM_LLD] = [
    "zcr",
    "max_sample",
    "min_sample",
    "offset",
    "rms_energy",
    "log_energy",
    "f0",
    "voicing_prob",
    "f0_quality",
    "hnr",
    "band_0_250",
    "band_0_650",
    "band_250_650",
    "band_1k_4k",
    "rolloff_10",
    "rolloff_25",
    "rolloff_50",
    "rolloff_75",
    "rolloff_90",
    "centroid",
    "flux",
    "spec_max_pos",
    "spec_min_pos",
    "mfcc_0",
    "mfcc_1",
    "mfcc_2",
    "mfcc_3",
    "mfcc_4",
    "mfcc_5",
    "mfcc_6",
    "mfcc_7",
    "mfcc_8",
    "mfcc_9",
    "mfcc_10",
    "mfcc_11",
    "mfcc_12",
    "mfcc_13",
    "mfcc_14",
    "mfcc_15",
];

pub const DERIVATIVE_NAMES: [&str; NUM_DERIVATIVES] = ["base", "de", "dede"];

/// Row indices of selected base descriptors.
pub mod lld {
    pub const ZCR: usize = 0;
    pub const MAX_SAMPLE: usize = 1;
    pub const MIN_SAMPLE: usize = 2;
    pub const OFFSET: usize = 3;
    pub const RMS_ENERGY: usize = 4;
    pub const LOG_ENERGY: usize = 5;
    pub const F0: usize = 6;
    pub const VOICING_PROB: usize = 7;
    pub const F0_QUALITY: usize = 8;
    pub const HNR: usize = 9;
    pub const BANDS: usize = 10;
    pub const ROLLOFF: usize = 14;
    pub const CENTROID: usize = 19;
    pub const FLUX: usize = 20;
    pub const SPEC_MAX_POS: usize = 21;
    pub const SPEC_MIN_POS: usize = 22;
    pub const MFCC: usize = 23;
}

/// `<lld>_<base|de|dede>` name of a contour row.
pub fn contour_name(row: usize) -> String {
    format!(
        "{}_{}",
        LLD_NAMES[row / NUM_DERIVATIVES],
        DERIVATIVE_NAMES[row % NUM_DERIVATIVES]
    )
}

#[derive(Debug, Error, PartialEq)]
pub enum DspError {
    #[error("segment of {len} samples is shorter than the minimum of {min}")]
    ShortSegment { len: usize, min: usize },
    #[error("invalid frame config: {0}")]
    InvalidConfig(String),
}

/// Analysis settings. Only the hop is fixed; the rest are defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameConfig {
    pub sample_rate: u32,
    /// Frame length in samples (400 = 25 ms).
    pub frame_length: usize,
    /// Hop in samples; must be 160.
    pub hop: usize,
    pub window: WindowKind,
    pub fft_size: usize,
    pub f0_min: f64,
    pub f0_max: f64,
    /// Samples over which each frame's pitch is estimated, centred on the
    /// frame. Two periods of `f0_min` keep long-lag correlations reliable.
    pub pitch_window: usize,
    pub voicing_threshold: f64,
    pub mel_filters: usize,
}

impl Default for FrameConfig {
    fn default() -> Self {
        Self {
            sample_rate: crate::corpus::SAMPLE_RATE,
            frame_length: 400,
            hop: HOP,
            window: WindowKind::Hamming,
            fft_size: 512,
            f0_min: 50.0,
            f0_max: 500.0,
            pitch_window: 640,
            voicing_threshold: 0.55,
            mel_filters: 26,
        }
    }
}

impl FrameConfig {
    pub fn validate(&self) -> Result<(), DspError> {
        let bad = |m: String| Err(DspError::InvalidConfig(m));
        if self.hop != HOP {
            return bad(format!("hop must be {HOP} samples, got {}", self.hop));
        }
        if self.frame_length < MIN_SEGMENT_SAMPLES || self.frame_length > self.fft_size {
            return bad(format!(
                "frame length {} must lie in {MIN_SEGMENT_SAMPLES}..={}",
                self.frame_length, self.fft_size
            ));
        }
        if !self.fft_size.is_power_of_two() {
            return bad(format!("fft size {} is not a power of two", self.fft_size));
        }
        if !(self.f0_min > 0.0 && self.f0_min < self.f0_max) {
            return bad(format!(
                "F0 range {}..{} is empty",
                self.f0_min, self.f0_max
            ));
        }
        if self.pitch_window < self.frame_length {
            return bad(format!(
                "pitch window {} shorter than the frame length {}",
                self.pitch_window, self.frame_length
            ));
        }
        if self.f0_max > f64::from(self.sample_rate) / 2.0 {
            return bad(format!("F0 max {} above Nyquist", self.f0_max));
        }
        if !(0.0..=1.0).contains(&self.voicing_threshold) {
            return bad(format!(
                "voicing threshold {} outside [0, 1]",
                self.voicing_threshold
            ));
        }
        if self.mel_filters < NUM_MFCC {
            return bad(format!(
                "need at least {NUM_MFCC} mel filters, got {}",
                self.mel_filters
            ));
        }
        Ok(())
    }

    /// Frequency in Hz of spectrum bin `k`.
    pub fn bin_frequency(&self, k: usize) -> f64 {
        k as f64 * f64::from(self.sample_rate) / self.fft_size as f64
    }
}

/// 117 contours over a common frame axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourMatrix {
    rows: Vec<Vec<f64>>,
}

impl ContourMatrix {
    /// Builds the matrix from the 39 base contours, adding Δ and ΔΔ rows.
    pub fn from_base(base: Vec<Vec<f64>>) -> Self {
        assert_eq!(base.len(), NUM_LLD, "expected {NUM_LLD} base contours");
        let frames = base[0].len();
        assert!(frames >= 1 && base.iter().all(|r| r.len() == frames));
        let mut rows = Vec::with_capacity(NUM_CONTOURS);
        for contour in base {
            let de = delta_regression(&contour, DELTA_WINDOW);
            let dede = delta_regression(&de, DELTA_WINDOW);
            rows.push(contour);
            rows.push(de);
            rows.push(dede);
        }
        Self { rows }
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.rows[index]
    }

    /// Row of base descriptor `lld` with derivative order `derivative`.
    pub fn contour(&self, lld: usize, derivative: usize) -> &[f64] {
        &self.rows[lld * NUM_DERIVATIVES + derivative]
    }

    pub fn num_frames(&self) -> usize {
        self.rows[0].len()
    }

    /// CSV dump: a header `contour,f0,f1,...` followed by one line per
    /// contour, values at full round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("contour");
        for t in 0..self.num_frames() {
            write!(out, ",f{t}").unwrap();
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(&contour_name(i));
            for v in row {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Reusable analysis state: window, FFT plan and mel filterbank.
pub struct Analyzer {
    cfg: FrameConfig,
    window: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    filterbank: MelFilterbank,
}

impl Analyzer {
    pub fn new(cfg: FrameConfig) -> Result<Self, DspError> {
        cfg.validate()?;
        let window = window_coefficients(cfg.window, cfg.frame_length);
        let fft = FftPlanner::new().plan_fft_forward(cfg.fft_size);
        let filterbank = MelFilterbank::new(&cfg);
        Ok(Self {
            cfg,
            window,
            fft,
            filterbank,
        })
    }

    pub fn config(&self) -> &FrameConfig {
        &self.cfg
    }

    pub fn filterbank(&self) -> &MelFilterbank {
        &self.filterbank
    }

    /// Magnitude spectrum (`fft_size / 2 + 1` bins) of a windowed frame.
    pub fn magnitude_spectrum(&self, frame: &[f64]) -> Vec<f64> {
        let mut buf = vec![Complex::new(0.0, 0.0); self.cfg.fft_size];
        for (i, (x, w)) in frame.iter().zip(&self.window).enumerate() {
            buf[i] = Complex::new(x * w, 0.0);
        }
        self.fft.process(&mut buf);
        buf[..=self.cfg.fft_size / 2]
            .iter()
            .map(|c| c.norm())
            .collect()
    }

    /// Computes the 117-row contour matrix of a segment.
    ///
    /// Segments between [`MIN_SEGMENT_SAMPLES`] and one frame length are
    /// analysed as a single zero-padded frame.
    pub fn extract(&self, samples: &[f64]) -> Result<ContourMatrix, DspError> {
        let cfg = &self.cfg;
        if samples.len() < MIN_SEGMENT_SAMPLES {
            return Err(DspError::ShortSegment {
                len: samples.len(),
                min: MIN_SEGMENT_SAMPLES,
            });
        }
        let padded;
        let (signal, frames): (&[f64], Vec<&[f64]>) = if samples.len() >= cfg.frame_length {
            (samples, frame_signal(samples, cfg)?)
        } else {
            let mut p = samples.to_vec();
            p.resize(cfg.frame_length, 0.0);
            padded = p;
            (&padded[..], vec![&padded[..]])
        };

        let mut base = vec![Vec::with_capacity(frames.len()); NUM_LLD];
        let mut prev_spectrum: Option<Vec<f64>> = None;
        for (i, frame) in frames.into_iter().enumerate() {
            let pitch_frame =
                pitch_span(signal, i * cfg.hop + cfg.frame_length / 2, cfg.pitch_window);
            let values = self.frame_descriptors(frame, pitch_frame, prev_spectrum.as_deref());
            for (row, v) in base.iter_mut().zip(values.0) {
                row.push(v);
            }
            prev_spectrum = Some(values.1);
        }
        Ok(ContourMatrix::from_base(base))
    }

    /// All 39 base descriptors of one raw frame, plus the frame's magnitude
    /// spectrum (needed for the next frame's flux).
    fn frame_descriptors(
        &self,
        frame: &[f64],
        pitch_frame: &[f64],
        prev: Option<&[f64]>,
    ) -> ([f64; NUM_LLD], Vec<f64>) {
        let mut out = [0.0; NUM_LLD];
        let te = time_energy_lld(frame, self.cfg.sample_rate);
        out[lld::ZCR] = te.zcr;
        out[lld::MAX_SAMPLE] = te.max_sample;
        out[lld::MIN_SAMPLE] = te.min_sample;
        out[lld::OFFSET] = te.offset;
        out[lld::RMS_ENERGY] = te.rms_energy;
        out[lld::LOG_ENERGY] = te.log_energy;

        let p = acf_pitch(pitch_frame, &self.cfg);
        out[lld::F0] = p.f0;
        out[lld::VOICING_PROB] = p.voicing_prob;
        out[lld::F0_QUALITY] = p.f0_quality;
        out[lld::HNR] = p.hnr;

        let spectrum = self.magnitude_spectrum(frame);
        let s = spectral_lld(&spectrum, prev, &self.cfg);
        out[lld::BANDS..lld::BANDS + 4].copy_from_slice(&s.band_energy);
        out[lld::ROLLOFF..lld::ROLLOFF + 5].copy_from_slice(&s.rolloff);
        out[lld::CENTROID] = s.centroid;
        out[lld::FLUX] = s.flux;
        out[lld::SPEC_MAX_POS] = s.max_position;
        out[lld::SPEC_MIN_POS] = s.min_position;

        let cepstrum = mfcc(&spectrum, &self.filterbank);
        out[lld::MFCC..].copy_from_slice(&cepstrum);
        (out, spectrum)
    }
}

/// `len` samples centred on `centre`, shifted to stay inside the signal;
/// the whole signal when it is shorter.
fn pitch_span(signal: &[f64], centre: usize, len: usize) -> &[f64] {
    if signal.len() <= len {
        return signal;
    }
    let start = centre.saturating_sub(len / 2).min(signal.len() - len);
    &signal[start..start + len]
}

/// Convenience wrapper: builds an [`Analyzer`] and extracts one segment.
pub fn extract_contours(
    segment: &SignalSegment,
    cfg: &FrameConfig,
) -> Result<ContourMatrix, DspError> {
    Analyzer::new(cfg.clone())?.extract(&segment.samples)
}
