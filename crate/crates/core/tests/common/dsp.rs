//! Analytic signals with known descriptor values.

use laughkit::dsp::{lld, mfcc_from_filterbank, spectral_lld, Analyzer, FrameConfig};

pub fn tone(freq: f64, n: usize, amp: f64) -> Vec<f64> {
    (0..n)
        .map(|i| amp * (2.0 * std::f64::consts::PI * freq * i as f64 / 16_000.0).sin())
        .collect()
}

/// Tones every 10 Hz from 80 to 400 Hz; every frame must carry F0 within
/// 2% and voicing above 0.9. Returns the failures.
pub fn pure_tone_pitch_failures() -> Vec<String> {
    let analyzer = Analyzer::new(FrameConfig::default()).unwrap();
    let mut failures = Vec::new();
    for f in (80..=400).step_by(10).map(f64::from) {
        let c = analyzer.extract(&tone(f, 8_000, 0.5)).unwrap();
        for (t, (&f0, &v)) in c
            .contour(lld::F0, 0)
            .iter()
            .zip(c.contour(lld::VOICING_PROB, 0))
            .enumerate()
        {
            if (f0 - f).abs() > 0.02 * f || v <= 0.9 {
                failures.push(format!("{f} Hz frame {t}: f0 {f0:.2}, voicing {v:.3}"));
            }
        }
    }
    failures
}

/// Largest distance in Hz between a windowed tone's spectral centroid and
/// the tone frequency, over tones from 500 Hz to 6 kHz.
pub fn worst_centroid_error() -> f64 {
    let cfg = FrameConfig::default();
    let analyzer = Analyzer::new(cfg.clone()).unwrap();
    (0..23)
        .map(|k| {
            let f = 500.0 + 250.0 * k as f64 + 17.0;
            let mag = analyzer.magnitude_spectrum(&tone(f, cfg.frame_length, 0.5));
            (spectral_lld(&mag, None, &cfg).centroid - f).abs()
        })
        .fold(0.0, f64::max)
}

pub fn bin_width() -> f64 {
    let cfg = FrameConfig::default();
    f64::from(cfg.sample_rate) / cfg.fft_size as f64
}

/// Flux between a spectrum and itself.
pub fn identical_spectra_flux() -> f64 {
    let cfg = FrameConfig::default();
    let analyzer = Analyzer::new(cfg.clone()).unwrap();
    let mag = analyzer.magnitude_spectrum(&tone(440.0, cfg.frame_length, 0.3));
    spectral_lld(&mag, Some(&mag), &cfg).flux
}

/// Largest |c1..c15| for flat filterbank energies at several levels.
pub fn flat_energy_mfcc_max() -> f64 {
    [1e-6, 0.5, 1.0, 3.0, 1e6]
        .iter()
        .flat_map(|&level| mfcc_from_filterbank(&[level; 26])[1..].to_vec())
        .map(f64::abs)
        .fold(0.0, f64::max)
}
