//! The 51 statistics applied to each descriptor contour.
//!
//! Order of the output vector (see [`Functional`]):
//!
//! | group | functionals |
//! |---|---|
//! | extremes | max, min, relative position of max, of min |
//! | ranges | range, max − mean, min − mean |
//! | means | arithmetic, quadratic |
//! | absolute / non-zero | mean of abs, mean of non-zero values |
//! | non-zero | fraction of non-zero values |
//! | percentiles | q1, q2, q3, iqr 1-2, 2-3, 1-3, 95%, 98% |
//! | moments | std, variance, kurtosis, skewness |
//! | centroid | Σ i·x / Σ x |
//! | crossings | zero-crossing rate, mean-crossing rate |
//! | level times | 25% down-level time, 75% up-level time |
//! | slopes | rise time, fall time |
//! | peaks | count, mean distance, mean value, mean value − mean |
//! | segments | number of segments from 0.25·range thresholding |
//! | linear fit | slope, offset, quadratic error, absolute error |
//! | quadratic fit | a, b, c, quadratic error, absolute error |
//! | DCT | orthonormal DCT-II coefficients 0–5 |
//!
//! Moments use divisor N. Percentiles interpolate linearly at position
//! `(N−1)·p` of the sorted contour. Every functional is defined for N = 1.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub const NUM_FUNCTIONALS: usize = 51;
pub const NUM_DCT: usize = 6;
/// Segment threshold as a fraction of the contour range.
pub const SEGMENT_THRESHOLD: f64 = 0.25;
/// Variance (and |Σx| for the centroid) below this counts as zero.
const DEGENERATE: f64 = 1e-24;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FunctionalError {
    #[error("functionals need a contour with at least one value")]
    EmptyContour,
    #[error("no functional named `{0}`")]
    UnknownName(String),
}

macro_rules! functionals {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// One of the 51 functionals, in output order.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Functional { $($variant),* }

        impl Functional {
            pub const ALL: [Functional; NUM_FUNCTIONALS] = [$(Functional::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(Functional::$variant => $name),* }
            }
        }
    };
}

functionals! {
    Max => "max",
    Min => "min",
    MaxPos => "maxPos",
    MinPos => "minPos",
    Range => "range",
    MaxMinusMean => "maxameandist",
    MinMinusMean => "minameandist",
    Mean => "amean",
    QuadraticMean => "qmean",
    AbsMean => "absmean",
    NonZeroMean => "nzamean",
    NonZeroFraction => "nnz",
    Quartile1 => "quartile1",
    Quartile2 => "quartile2",
    Quartile3 => "quartile3",
    Iqr12 => "iqr1-2",
    Iqr23 => "iqr2-3",
    Iqr13 => "iqr1-3",
    Percentile95 => "percentile95",
    Percentile98 => "percentile98",
    StdDev => "stddev",
    Variance => "variance",
    Kurtosis => "kurtosis",
    Skewness => "skewness",
    Centroid => "centroid",
    ZeroCrossingRate => "zcr",
    MeanCrossingRate => "mcr",
    DownLevelTime25 => "downleveltime25",
    UpLevelTime75 => "upleveltime75",
    RiseTime => "risetime",
    FallTime => "falltime",
    NumPeaks => "numPeaks",
    PeakDistance => "meanPeakDist",
    PeakMean => "peakMean",
    PeakMeanMinusMean => "peakMeanMeanDist",
    NumSegments => "numSegments",
    LinSlope => "linregc1",
    LinOffset => "linregc2",
    LinQuadError => "linregerrQ",
    LinAbsError => "linregerrA",
    QuadA => "qregc1",
    QuadB => "qregc2",
    QuadC => "qregc3",
    QuadQuadError => "qregerrQ",
    QuadAbsError => "qregerrA",
    Dct0 => "dct0",
    Dct1 => "dct1",
    Dct2 => "dct2",
    Dct3 => "dct3",
    Dct4 => "dct4",
    Dct5 => "dct5",
}

impl Functional {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }
}

impl std::str::FromStr for Functional {
    type Err = FunctionalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| FunctionalError::UnknownName(s.to_string()))
    }
}

/// The 51 functional values of one contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalVector {
    #[serde(with = "serde_big_array")]
    pub values: [f64; NUM_FUNCTIONALS],
}

impl FunctionalVector {
    pub fn get(&self, f: Functional) -> f64 {
        self.values[f.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

impl std::ops::Index<Functional> for FunctionalVector {
    type Output = f64;

    fn index(&self, f: Functional) -> &f64 {
        &self.values[f.index()]
    }
}

mod serde_big_array {
    use super::NUM_FUNCTIONALS;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64; NUM_FUNCTIONALS], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<[f64; NUM_FUNCTIONALS], D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        let len = v.len();
        v.try_into()
            .map_err(|_| D::Error::invalid_length(len, &"51 functional values"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub offset: f64,
    /// Mean squared residual.
    pub quadratic_error: f64,
    /// Mean absolute residual.
    pub absolute_error: f64,
}

/// Least-squares parabola `a·t² + b·t + c` over `t = 0..N−1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub quadratic_error: f64,
    pub absolute_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakStats {
    pub count: usize,
    /// Mean distance in frames between consecutive peaks, 0 with fewer than two.
    pub mean_distance: f64,
    pub mean_value: f64,
    pub mean_value_minus_mean: f64,
}

pub fn apply_functionals(contour: &[f64]) -> Result<FunctionalVector, FunctionalError> {
    use Functional::*;

    let n = contour.len();
    if n == 0 {
        return Err(FunctionalError::EmptyContour);
    }
    let nf = n as f64;
    let mut v = [0.0; NUM_FUNCTIONALS];
    let mut set = |f: Functional, x: f64| v[f.index()] = x;

    let (mut imax, mut imin) = (0, 0);
    for (i, &x) in contour.iter().enumerate() {
        if x > contour[imax] {
            imax = i;
        }
        if x < contour[imin] {
            imin = i;
        }
    }
    let (max, min) = (contour[imax], contour[imin]);
    let range = max - min;
    let mean = contour.iter().sum::<f64>() / nf;
    let last = (n - 1) as f64;
    set(Max, max);
    set(Min, min);
    set(MaxPos, if n > 1 { imax as f64 / last } else { 0.0 });
    set(MinPos, if n > 1 { imin as f64 / last } else { 0.0 });
    set(Range, range);
    set(MaxMinusMean, max - mean);
    set(MinMinusMean, min - mean);
    set(Mean, mean);
    set(
        QuadraticMean,
        (contour.iter().map(|x| x * x).sum::<f64>() / nf).sqrt(),
    );
    set(AbsMean, contour.iter().map(|x| x.abs()).sum::<f64>() / nf);
    let nonzero: Vec<f64> = contour.iter().copied().filter(|&x| x != 0.0).collect();
    set(
        NonZeroMean,
        if nonzero.is_empty() {
            0.0
        } else {
            nonzero.iter().sum::<f64>() / nonzero.len() as f64
        },
    );
    set(NonZeroFraction, nonzero.len() as f64 / nf);

    let mut sorted = contour.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = percentile_sorted(&sorted, 0.25);
    let q2 = percentile_sorted(&sorted, 0.5);
    let q3 = percentile_sorted(&sorted, 0.75);
    set(Quartile1, q1);
    set(Quartile2, q2);
    set(Quartile3, q3);
    set(Iqr12, q2 - q1);
    set(Iqr23, q3 - q2);
    set(Iqr13, q3 - q1);
    set(Percentile95, percentile_sorted(&sorted, 0.95));
    set(Percentile98, percentile_sorted(&sorted, 0.98));

    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in contour {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
    set(StdDev, m2.sqrt());
    set(Variance, m2);
    if m2 >= DEGENERATE {
        set(Kurtosis, m4 / (m2 * m2));
        set(Skewness, m3 / (m2 * m2.sqrt()));
    }

    let sum: f64 = contour.iter().sum();
    if sum.abs() >= DEGENERATE {
        let weighted: f64 = contour.iter().enumerate().map(|(i, x)| i as f64 * x).sum();
        set(Centroid, weighted / sum);
    }

    set(ZeroCrossingRate, crossings(contour, 0.0) as f64 / nf);
    set(MeanCrossingRate, crossings(contour, mean) as f64 / nf);
    let down = min + 0.25 * range;
    let up = min + 0.75 * range;
    set(
        DownLevelTime25,
        contour.iter().filter(|&&x| x < down).count() as f64 / nf,
    );
    set(
        UpLevelTime75,
        contour.iter().filter(|&&x| x > up).count() as f64 / nf,
    );
    if n > 1 {
        let pairs = last;
        set(
            RiseTime,
            contour.windows(2).filter(|w| w[1] > w[0]).count() as f64 / pairs,
        );
        set(
            FallTime,
            contour.windows(2).filter(|w| w[1] < w[0]).count() as f64 / pairs,
        );
    }

    let peaks = peak_statistics_with_mean(contour, mean);
    set(NumPeaks, peaks.count as f64);
    set(PeakDistance, peaks.mean_distance);
    set(PeakMean, peaks.mean_value);
    set(PeakMeanMinusMean, peaks.mean_value_minus_mean);
    set(NumSegments, segments_with_range(contour, range) as f64);

    let lin = fit_linear_regression(contour);
    set(LinSlope, lin.slope);
    set(LinOffset, lin.offset);
    set(LinQuadError, lin.quadratic_error);
    set(LinAbsError, lin.absolute_error);
    let quad = fit_quadratic_regression(contour);
    set(QuadA, quad.a);
    set(QuadB, quad.b);
    set(QuadC, quad.c);
    set(QuadQuadError, quad.quadratic_error);
    set(QuadAbsError, quad.absolute_error);

    for k in 0..NUM_DCT {
        v[Dct0.index() + k] = dct_coefficient(contour, k);
    }

    Ok(FunctionalVector { values: v })
}

/// Linear interpolation at position `(N−1)·p` of an ascending slice.
pub fn percentile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * p;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    match sorted.get(lo + 1) {
        Some(&hi) if frac > 0.0 => sorted[lo] + frac * (hi - sorted[lo]),
        _ => sorted[lo],
    }
}

/// Sign changes of `x − level`, with values at the level counted as positive.
fn crossings(contour: &[f64], level: f64) -> usize {
    contour
        .windows(2)
        .filter(|w| (w[0] - level >= 0.0) != (w[1] - level >= 0.0))
        .count()
}

/// Least-squares line over `t = 0..N−1`. A single value gives slope 0.
pub fn fit_linear_regression(contour: &[f64]) -> LinearFit {
    let n = contour.len();
    let nf = n as f64;
    let mean = contour.iter().sum::<f64>() / nf;
    let tc = (nf - 1.0) / 2.0;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, &x) in contour.iter().enumerate() {
        let u = t as f64 - tc;
        sxy += u * (x - mean);
        sxx += u * u;
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let (qe, ae) = residual_errors(contour, |t| mean + slope * (t - tc));
    LinearFit {
        slope,
        offset: mean - slope * tc,
        quadratic_error: qe,
        absolute_error: ae,
    }
}

/// Least-squares parabola over `t = 0..N−1`; with N ≤ 2 the fit is linear
/// and `a = 0`.
///
/// The fit projects onto discrete polynomials orthogonal over the centred
/// time axis, which keeps long contours well conditioned.
pub fn fit_quadratic_regression(contour: &[f64]) -> QuadraticFit {
    let n = contour.len();
    if n <= 2 {
        let lin = fit_linear_regression(contour);
        return QuadraticFit {
            a: 0.0,
            b: lin.slope,
            c: lin.offset,
            quadratic_error: lin.quadratic_error,
            absolute_error: lin.absolute_error,
        };
    }
    let nf = n as f64;
    let tc = (nf - 1.0) / 2.0;
    // p0 = 1, p1 = u, p2 = u² − s2/N with u = t − tc
    let s2: f64 = (0..n).map(|t| (t as f64 - tc).powi(2)).sum();
    let shift = s2 / nf;
    let (mut x0, mut x1, mut x2, mut n2) = (0.0, 0.0, 0.0, 0.0);
    for (t, &x) in contour.iter().enumerate() {
        let u = t as f64 - tc;
        let p2 = u * u - shift;
        x0 += x;
        x1 += u * x;
        x2 += p2 * x;
        n2 += p2 * p2;
    }
    let (c0, c1, c2) = (x0 / nf, x1 / s2, x2 / n2);
    let (qe, ae) = residual_errors(contour, |t| {
        let u = t - tc;
        c0 + c1 * u + c2 * (u * u - shift)
    });
    QuadraticFit {
        a: c2,
        b: c1 - 2.0 * c2 * tc,
        c: c0 - c1 * tc + c2 * (tc * tc - shift),
        quadratic_error: qe,
        absolute_error: ae,
    }
}

fn residual_errors(contour: &[f64], model: impl Fn(f64) -> f64) -> (f64, f64) {
    let (mut q, mut a) = (0.0, 0.0);
    for (t, &x) in contour.iter().enumerate() {
        let r = x - model(t as f64);
        q += r * r;
        a += r.abs();
    }
    let nf = contour.len() as f64;
    (q / nf, a / nf)
}

/// Orthonormal DCT-II coefficient `k`; 0 when `k ≥ N`.
pub fn dct_coefficient(contour: &[f64], k: usize) -> f64 {
    let n = contour.len();
    if k >= n {
        return 0.0;
    }
    let nf = n as f64;
    let scale = if k == 0 {
        (1.0 / nf).sqrt()
    } else {
        (2.0 / nf).sqrt()
    };
    scale
        * contour
            .iter()
            .enumerate()
            .map(|(i, x)| x * (PI * k as f64 * (i as f64 + 0.5) / nf).cos())
            .sum::<f64>()
}

/// Strict local maxima; the endpoints are never peaks.
pub fn peak_statistics(contour: &[f64]) -> PeakStats {
    let mean = contour.iter().sum::<f64>() / contour.len().max(1) as f64;
    peak_statistics_with_mean(contour, mean)
}

fn peak_statistics_with_mean(contour: &[f64], mean: f64) -> PeakStats {
    let peaks: Vec<usize> = (1..contour.len().saturating_sub(1))
        .filter(|&i| contour[i - 1] < contour[i] && contour[i] > contour[i + 1])
        .collect();
    let count = peaks.len();
    if count == 0 {
        return PeakStats {
            count,
            mean_distance: 0.0,
            mean_value: 0.0,
            mean_value_minus_mean: 0.0,
        };
    }
    let mean_value = peaks.iter().map(|&i| contour[i]).sum::<f64>() / count as f64;
    PeakStats {
        count,
        mean_distance: if count > 1 {
            (peaks[count - 1] - peaks[0]) as f64 / (count - 1) as f64
        } else {
            0.0
        },
        mean_value,
        mean_value_minus_mean: mean_value - mean,
    }
}

/// A new segment starts whenever a value departs from the current
/// segment's first value by more than a quarter of the contour range.
pub fn segment_count(contour: &[f64]) -> usize {
    if contour.is_empty() {
        return 0;
    }
    let max = contour.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = contour.iter().copied().fold(f64::INFINITY, f64::min);
    segments_with_range(contour, max - min)
}

fn segments_with_range(contour: &[f64], range: f64) -> usize {
    let threshold = SEGMENT_THRESHOLD * range;
    let mut anchor = contour[0];
    let mut count = 1;
    for &x in &contour[1..] {
        if (x - anchor).abs() > threshold {
            count += 1;
            anchor = x;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Functional::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn registry() {
        assert_eq!(Functional::ALL.len(), 51);
        let names: std::collections::HashSet<_> =
            Functional::ALL.iter().map(|f| f.name()).collect();
        assert_eq!(names.len(), 51);
        for (i, f) in Functional::ALL.iter().enumerate() {
            assert_eq!(f.index(), i);
            assert_eq!(f.name().parse::<Functional>().unwrap(), *f);
        }
    }

    #[test]
    fn empty_contour_is_an_error() {
        assert_eq!(apply_functionals(&[]), Err(FunctionalError::EmptyContour));
    }

    #[test]
    fn constant_contour() {
        let c = 2.5;
        let v = apply_functionals(&[c; 9]).unwrap();
        for f in [Max, Min, Mean, Quartile2, LinOffset, QuadC] {
            assert!(close(v[f], c), "{f:?}");
        }
        for f in [
            Range,
            StdDev,
            Skewness,
            Kurtosis,
            MeanCrossingRate,
            NumPeaks,
            LinSlope,
            QuadA,
        ] {
            assert!(v[f].abs() < 1e-12, "{f:?} = {}", v[f]);
        }
        assert!(v[LinQuadError] < 1e-24 && v[LinAbsError] < 1e-12);
        assert!(v[QuadQuadError] < 1e-24 && v[QuadAbsError] < 1e-12);
        assert!(close(v[Dct0], c * 3.0));
        for k in 1..6 {
            assert!(v.values[Dct0.index() + k].abs() < 1e-12);
        }
        assert_eq!(v[NumSegments], 1.0);
    }

    #[test]
    fn ramp() {
        let v = apply_functionals(&[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(v[Mean], 2.0);
        assert_eq!(v[Quartile2], 2.0);
        assert!(close(v[LinSlope], 1.0));
        assert!(v[LinOffset].abs() < 1e-12);
        assert!(v[LinQuadError] < 1e-24 && v[QuadQuadError] < 1e-24);
        assert_eq!(v[RiseTime], 1.0);
        assert_eq!(v[FallTime], 0.0);
    }

    #[test]
    fn single_value() {
        let v = apply_functionals(&[-3.0]).unwrap();
        assert_eq!(v[MaxPos], 0.0);
        assert_eq!(v[RiseTime], 0.0);
        assert_eq!(v[LinOffset], -3.0);
        assert_eq!(v[QuadC], -3.0);
        assert!(v.values.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn linear_fits() {
        let f = fit_linear_regression(&[3.0, 3.0, 3.0]);
        assert_eq!(
            (f.slope, f.offset, f.quadratic_error, f.absolute_error),
            (0.0, 3.0, 0.0, 0.0)
        );
        let f = fit_linear_regression(&[0.0, 2.0, 4.0]);
        assert!(close(f.slope, 2.0) && f.offset.abs() < 1e-12 && f.quadratic_error < 1e-24);
        let f = fit_linear_regression(&[1.0, 0.0, 1.0]);
        assert!(f.slope.abs() < 1e-15);
        assert!(close(f.offset, 2.0 / 3.0));
        assert!(close(f.quadratic_error, 2.0 / 9.0));
        assert!(close(f.absolute_error, 4.0 / 9.0));
    }

    #[test]
    fn quadratic_fits() {
        let f = fit_quadratic_regression(&[0.0, 1.0, 4.0]);
        assert!(close(f.a, 1.0) && f.b.abs() < 1e-12 && f.c.abs() < 1e-12);
        assert!(f.quadratic_error < 1e-24 && f.absolute_error < 1e-12);
        let f = fit_quadratic_regression(&[7.0; 5]);
        assert!(f.a.abs() < 1e-12 && f.b.abs() < 1e-12 && close(f.c, 7.0));
        let f = fit_quadratic_regression(&[1.0, 5.0]);
        assert_eq!(f.a, 0.0);
        assert!(close(f.b, 4.0) && close(f.c, 1.0));
    }

    #[test]
    fn dct_rules() {
        assert!(close(dct_coefficient(&[1.5; 4], 0), 3.0));
        for k in 1..6 {
            assert!(dct_coefficient(&[1.5; 4], k).abs() < 1e-12);
        }
        assert_eq!(dct_coefficient(&[1.0, 2.0], 3), 0.0);
        let n = 32;
        let basis: Vec<f64> = (0..n)
            .map(|t| (PI * (t as f64 + 0.5) / n as f64).cos())
            .collect();
        let energy: Vec<f64> = (0..6).map(|k| dct_coefficient(&basis, k).powi(2)).collect();
        let total: f64 = basis.iter().map(|x| x * x).sum();
        assert!(close(energy[1], total));
        assert!(energy.iter().enumerate().all(|(k, e)| k == 1 || *e < 1e-20));
    }

    #[test]
    fn peaks() {
        let p = peak_statistics(&[0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(p.count, 2);
        assert_eq!(p.mean_distance, 2.0);
        assert_eq!(p.mean_value, 1.0);
        assert!(close(p.mean_value_minus_mean, 0.6));
        assert_eq!(peak_statistics(&[1.0, 2.0, 3.0, 4.0]).count, 0);
        assert_eq!(peak_statistics(&[2.0; 6]).count, 0);
        assert_eq!(peak_statistics(&[0.0, 1.0, 1.0, 0.0]).count, 0);
    }

    #[test]
    fn segments() {
        assert_eq!(segment_count(&[4.0; 7]), 1);
        assert_eq!(segment_count(&[0.0, 0.0, 0.0, 10.0, 10.0, 10.0]), 2);
        assert_eq!(segment_count(&[0.0, 10.0, 0.0, 10.0]), 4);
    }

    fn contour() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-100.0..100.0f64, 2..80)
    }

    proptest! {
        #[test]
        fn shift_invariance(x in contour(), b in -50.0..50.0f64) {
            let v = apply_functionals(&x).unwrap();
            let shifted: Vec<f64> = x.iter().map(|a| a + b).collect();
            let w = apply_functionals(&shifted).unwrap();
            let tol = |a: f64, c: f64| (a - c).abs() <= 1e-9 * (1.0 + a.abs().max(c.abs()));
            for f in [Range, StdDev, Variance, Skewness, Kurtosis, MeanCrossingRate, RiseTime,
                      FallTime, NumPeaks, LinSlope, QuadA, PeakMeanMinusMean] {
                prop_assert!(tol(v[f], w[f]), "{:?}: {} vs {}", f, v[f], w[f]);
            }
            for f in [LinQuadError, QuadQuadError, LinAbsError, QuadAbsError] {
                prop_assert!((v[f] - w[f]).abs() <= 1e-8 * (1.0 + v[f]), "{:?}", f);
            }
            for f in [Mean, Max, Min, Quartile1, Quartile2, Quartile3, LinOffset, QuadC] {
                prop_assert!(tol(v[f] + b, w[f]), "{:?}", f);
            }
        }

        #[test]
        fn scale_covariance(x in contour(), s in 0.01..100.0f64) {
            let v = apply_functionals(&x).unwrap();
            let w = apply_functionals(&x.iter().map(|a| a * s).collect::<Vec<_>>()).unwrap();
            let tol = |a: f64, c: f64| (a - c).abs() <= 1e-9 * (1e-6 + a.abs().max(c.abs()));
            for f in [Max, Min, Range, Mean, StdDev, Quartile1, Quartile2, Quartile3, LinSlope, QuadA] {
                prop_assert!(tol(v[f] * s, w[f]), "{:?}", f);
            }
            // dimensionless, so order one
            for f in [MaxPos, MinPos, RiseTime, FallTime, NumPeaks, NonZeroFraction, Skewness, Kurtosis] {
                prop_assert!((v[f] - w[f]).abs() <= 1e-9 * (1.0 + v[f].abs()), "{:?}: {} vs {}", f, v[f], w[f]);
            }
        }

        #[test]
        fn reversal(x in contour()) {
            let v = apply_functionals(&x).unwrap();
            let r: Vec<f64> = x.iter().rev().copied().collect();
            let w = apply_functionals(&r).unwrap();
            prop_assert_eq!(v[RiseTime], w[FallTime]);
            prop_assert_eq!(v[FallTime], w[RiseTime]);
            prop_assert!((v[MaxPos] - (1.0 - w[MaxPos])).abs() < 1e-12);
            prop_assert!((v[LinSlope] + w[LinSlope]).abs() <= 1e-9 * (1.0 + v[LinSlope].abs()));
        }

        #[test]
        fn ranges_and_identities(x in prop::collection::vec(-1e3..1e3f64, 1..60)) {
            let v = apply_functionals(&x).unwrap();
            for f in [MaxPos, MinPos, NonZeroFraction, DownLevelTime25, UpLevelTime75, RiseTime, FallTime] {
                prop_assert!((0.0..=1.0).contains(&v[f]));
            }
            prop_assert!(v[Variance] >= 0.0);
            prop_assert!((v[Iqr13] - (v[Iqr12] + v[Iqr23])).abs() <= 1e-9 * (1.0 + v[Iqr13].abs()));
            prop_assert!(v.values.iter().all(|a| a.is_finite()));
        }
    }
}
