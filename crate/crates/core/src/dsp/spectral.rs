use super::FrameConfig;

/// Band edges in Hz, half-open `[lo, hi)`.
pub const BANDS: [(f64, f64); 4] = [(0.0, 250.0), (0.0, 650.0), (250.0, 650.0), (1000.0, 4000.0)];
pub const ROLLOFF_POINTS: [f64; 5] = [0.10, 0.25, 0.50, 0.75, 0.90];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDescriptors {
    /// Summed power of bins whose centre frequency lies in each of [`BANDS`].
    pub band_energy: [f64; 4],
    /// Roll-off frequencies in Hz for each of [`ROLLOFF_POINTS`].
    pub rolloff: [f64; 5],
    /// Power-weighted mean frequency in Hz.
    pub centroid: f64,
    pub flux: f64,
    /// Bin index of the largest / smallest magnitude over `fft_size / 2`.
    pub max_position: f64,
    pub min_position: f64,
}

/// Spectral descriptors of a magnitude spectrum with `fft_size / 2 + 1`
/// bins. `prev` is the previous frame's spectrum; the first frame has no
/// flux.
pub fn spectral_lld(
    magnitude: &[f64],
    prev: Option<&[f64]>,
    cfg: &FrameConfig,
) -> SpectralDescriptors {
    let bins = magnitude.len();
    debug_assert_eq!(bins, cfg.fft_size / 2 + 1);
    let power: Vec<f64> = magnitude.iter().map(|m| m * m).collect();
    let freq = |k: usize| cfg.bin_frequency(k);

    let mut band_energy = [0.0; 4];
    for (e, (lo, hi)) in band_energy.iter_mut().zip(BANDS) {
        *e = power
            .iter()
            .enumerate()
            .filter(|(k, _)| (lo..hi).contains(&freq(*k)))
            .map(|(_, p)| p)
            .sum();
    }

    let total: f64 = power.iter().sum();
    let mut rolloff = [0.0; 5];
    let mut centroid = 0.0;
    if total > 0.0 {
        let mut cumulative = 0.0;
        let mut next = 0;
        for (k, p) in power.iter().enumerate() {
            cumulative += p;
            while next < ROLLOFF_POINTS.len() && cumulative >= ROLLOFF_POINTS[next] * total {
                rolloff[next] = freq(k);
                next += 1;
            }
        }
        // rounding can leave the last points unreached by a hair
        for r in &mut rolloff[next..] {
            *r = freq(bins - 1);
        }
        centroid = power
            .iter()
            .enumerate()
            .map(|(k, p)| freq(k) * p)
            .sum::<f64>()
            / total;
    }

    let flux = match prev {
        Some(prev) => {
            magnitude
                .iter()
                .zip(prev)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                / bins as f64
        }
        None => 0.0,
    };

    let half = (cfg.fft_size / 2) as f64;
    let argmax = (0..bins).fold(0, |best, k| {
        if magnitude[k] > magnitude[best] {
            k
        } else {
            best
        }
    });
    let argmin = (0..bins).fold(0, |best, k| {
        if magnitude[k] < magnitude[best] {
            k
        } else {
            best
        }
    });

    SpectralDescriptors {
        band_energy,
        rolloff,
        centroid,
        flux,
        max_position: argmax as f64 / half,
        min_position: argmin as f64 / half,
    }
}
