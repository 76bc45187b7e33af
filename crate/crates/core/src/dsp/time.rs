use super::LOG_FLOOR;

/// Time-domain and energy descriptors of one raw frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeEnergy {
    /// Sign changes per second.
    pub zcr: f64,
    pub max_sample: f64,
    pub min_sample: f64,
    /// Mean sample value.
    pub offset: f64,
    pub rms_energy: f64,
    /// `ln(max(mean square, 1e-12))`.
    pub log_energy: f64,
}

pub fn time_energy_lld(frame: &[f64], sample_rate: u32) -> TimeEnergy {
    assert!(!frame.is_empty(), "empty frame");
    let n = frame.len() as f64;
    let crossings = frame
        .windows(2)
        .filter(|w| (w[0] >= 0.0) != (w[1] >= 0.0))
        .count();
    let (mut max, mut min, mut sum, mut sq) = (f64::MIN, f64::MAX, 0.0, 0.0);
    for &x in frame {
        max = max.max(x);
        min = min.min(x);
        sum += x;
        sq += x * x;
    }
    let mean_sq = sq / n;
    TimeEnergy {
        zcr: crossings as f64 * f64::from(sample_rate) / n,
        max_sample: max,
        min_sample: min,
        offset: sum / n,
        rms_energy: mean_sq.sqrt(),
        log_energy: mean_sq.max(LOG_FLOOR).ln(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_full_periods() {
        // 100 Hz: one period is 160 samples; two periods here
        let frame: Vec<f64> = (0..320)
            .map(|i| (2.0 * PI * 100.0 * i as f64 / 16_000.0 + 0.3).sin())
            .collect();
        let te = time_energy_lld(&frame, 16_000);
        assert!((te.zcr - 200.0).abs() < 1e-9);
        assert!(te.offset.abs() < 1e-3);
        assert!((te.rms_energy - 0.5f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn constant_frame() {
        let te = time_energy_lld(&[0.5; 400], 16_000);
        assert_eq!(te.zcr, 0.0);
        assert_eq!(te.max_sample, 0.5);
        assert_eq!(te.min_sample, 0.5);
        assert_eq!(te.offset, 0.5);
        assert_eq!(te.rms_energy, 0.5);
    }

    #[test]
    fn silent_frame_hits_floor() {
        let te = time_energy_lld(&[0.0; 400], 16_000);
        assert_eq!(te.rms_energy, 0.0);
        assert_eq!(te.log_energy, 1e-12f64.ln());
    }
}
