//! Brute-force reference implementation of every functional.

use laughkit::functionals::{apply_functionals, Functional, NUM_FUNCTIONALS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Straightforward, deliberately unoptimised definitions.
pub fn naive(x: &[f64]) -> [f64; NUM_FUNCTIONALS] {
    let n = x.len();
    let nf = n as f64;
    let mean = x.iter().sum::<f64>() / nf;

    let mut max_i = 0;
    let mut min_i = 0;
    for i in 0..n {
        if x[i] > x[max_i] {
            max_i = i;
        }
        if x[i] < x[min_i] {
            min_i = i;
        }
    }
    let max = x[max_i];
    let min = x[min_i];
    let rel = |i: usize| {
        if n == 1 {
            0.0
        } else {
            i as f64 / (n - 1) as f64
        }
    };

    let mut s = x.to_vec();
    // insertion sort
    for i in 1..n {
        let mut j = i;
        while j > 0 && s[j - 1] > s[j] {
            s.swap(j - 1, j);
            j -= 1;
        }
    }
    let pct = |p: f64| {
        let pos = (n - 1) as f64 * p;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let w = pos - lo as f64;
        (1.0 - w) * s[lo] + w * s[hi]
    };

    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / nf;
    let m3 = x.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / nf;
    let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / nf;
    let (kurt, skew) = if var < 1e-24 {
        (0.0, 0.0)
    } else {
        (m4 / var.powi(2), m3 / var.powf(1.5))
    };

    let total: f64 = x.iter().sum();
    let centroid = if total.abs() < 1e-24 {
        0.0
    } else {
        (0..n).map(|i| i as f64 * x[i]).sum::<f64>() / total
    };

    let sign_changes = |level: f64| {
        let mut c = 0;
        for i in 1..n {
            let a = x[i - 1] - level >= 0.0;
            let b = x[i] - level >= 0.0;
            if a != b {
                c += 1;
            }
        }
        c as f64 / nf
    };

    let range = max - min;
    let down = x.iter().filter(|&&v| v < min + 0.25 * range).count() as f64 / nf;
    let up = x.iter().filter(|&&v| v > min + 0.75 * range).count() as f64 / nf;
    let (mut rise, mut fall) = (0.0, 0.0);
    if n > 1 {
        for i in 1..n {
            if x[i] > x[i - 1] {
                rise += 1.0;
            } else if x[i] < x[i - 1] {
                fall += 1.0;
            }
        }
        rise /= (n - 1) as f64;
        fall /= (n - 1) as f64;
    }

    let mut peaks = Vec::new();
    for i in 1..n.saturating_sub(1) {
        if x[i] > x[i - 1] && x[i] > x[i + 1] {
            peaks.push(i);
        }
    }
    let mut dist = 0.0;
    if peaks.len() >= 2 {
        let gaps: Vec<f64> = peaks.windows(2).map(|w| (w[1] - w[0]) as f64).collect();
        dist = gaps.iter().sum::<f64>() / gaps.len() as f64;
    }
    let (pmean, pdist) = if peaks.is_empty() {
        (0.0, 0.0)
    } else {
        let m = peaks.iter().map(|&i| x[i]).sum::<f64>() / peaks.len() as f64;
        (m, m - mean)
    };

    let mut segs = 1.0;
    let mut anchor = x[0];
    for &v in &x[1..] {
        if (v - anchor).abs() > 0.25 * range {
            segs += 1.0;
            anchor = v;
        }
    }

    // closed-form simple regression
    let st: f64 = (0..n).map(|t| t as f64).sum();
    let stt: f64 = (0..n).map(|t| (t * t) as f64).sum();
    let stx: f64 = (0..n).map(|t| t as f64 * x[t]).sum();
    let den = nf * stt - st * st;
    let m = if den == 0.0 {
        0.0
    } else {
        (nf * stx - st * total) / den
    };
    let b = (total - m * st) / nf;
    let lin_res: Vec<f64> = (0..n).map(|t| x[t] - (m * t as f64 + b)).collect();

    // quadratic: Cramer's rule on the centred normal equations
    let (qa, qb, qc) = if n <= 2 {
        (0.0, m, b)
    } else {
        let tc = (nf - 1.0) / 2.0;
        let u: Vec<f64> = (0..n).map(|t| t as f64 - tc).collect();
        let s2: f64 = u.iter().map(|v| v * v).sum();
        let s4: f64 = u.iter().map(|v| v.powi(4)).sum();
        let sux: f64 = (0..n).map(|i| u[i] * x[i]).sum();
        let su2x: f64 = (0..n).map(|i| u[i] * u[i] * x[i]).sum();
        let det = nf * s4 - s2 * s2;
        let c0 = (total * s4 - s2 * su2x) / det;
        let a = (nf * su2x - s2 * total) / det;
        let b1 = sux / s2;
        (a, b1 - 2.0 * a * tc, c0 - b1 * tc + a * tc * tc)
    };
    let quad_res: Vec<f64> = (0..n)
        .map(|t| {
            let t = t as f64;
            x[t as usize] - (qa * t * t + qb * t + qc)
        })
        .collect();
    let mse = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>() / nf;
    let mae = |r: &[f64]| r.iter().map(|v| v.abs()).sum::<f64>() / nf;

    let dct = |k: usize| {
        if k >= n {
            return 0.0;
        }
        let mut acc = 0.0;
        for (i, v) in x.iter().enumerate() {
            acc += v * (std::f64::consts::PI / nf * (i as f64 + 0.5) * k as f64).cos();
        }
        acc * if k == 0 {
            1.0 / nf.sqrt()
        } else {
            (2.0 / nf).sqrt()
        }
    };

    let nonzero: Vec<f64> = x.iter().copied().filter(|v| *v != 0.0).collect();
    let (q1, q2, q3) = (pct(0.25), pct(0.5), pct(0.75));

    [
        max,
        min,
        rel(max_i),
        rel(min_i),
        range,
        max - mean,
        min - mean,
        mean,
        (x.iter().map(|v| v * v).sum::<f64>() / nf).sqrt(),
        x.iter().map(|v| v.abs()).sum::<f64>() / nf,
        if nonzero.is_empty() {
            0.0
        } else {
            nonzero.iter().sum::<f64>() / nonzero.len() as f64
        },
        nonzero.len() as f64 / nf,
        q1,
        q2,
        q3,
        q2 - q1,
        q3 - q2,
        q3 - q1,
        pct(0.95),
        pct(0.98),
        var.sqrt(),
        var,
        kurt,
        skew,
        centroid,
        sign_changes(0.0),
        sign_changes(mean),
        down,
        up,
        rise,
        fall,
        peaks.len() as f64,
        dist,
        pmean,
        pdist,
        segs,
        m,
        b,
        mse(&lin_res),
        mae(&lin_res),
        qa,
        qb,
        qc,
        mse(&quad_res),
        mae(&quad_res),
        dct(0),
        dct(1),
        dct(2),
        dct(3),
        dct(4),
        dct(5),
    ]
}

pub fn agrees(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()) || (a - b).abs() <= 1e-12
}

/// Contours of varied shape so that peaks, plateaus, zeros and trends all
/// occur.
pub fn random_contour(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = rng.gen_range(1..=500);
    let scale = 10f64.powi(rng.gen_range(-3..=3));
    match rng.gen_range(0..4) {
        0 => (0..n).map(|_| rng.gen_range(-1.0..1.0) * scale).collect(),
        1 => (0..n)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    0.0
                } else {
                    rng.gen_range(0.0..1.0) * scale
                }
            })
            .collect(),
        2 => (0..n).map(|_| rng.gen_range(0..5) as f64 * scale).collect(),
        _ => {
            let slope = rng.gen_range(-0.1..0.1);
            (0..n)
                .map(|t| {
                    (slope * t as f64 + (t as f64 * 0.3).sin() + rng.gen_range(-0.2..0.2)) * scale
                })
                .collect()
        }
    }
}

/// The centroid is ill-conditioned when the contour sums to almost zero.
pub fn centroid_well_posed(x: &[f64]) -> bool {
    let sum: f64 = x.iter().sum();
    let abs: f64 = x.iter().map(|v| v.abs()).sum();
    sum.abs() > 1e-6 * abs
}

/// Every disagreement between the library and [`naive`] on `cases` random
/// contours.
pub fn functional_mismatches(cases: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for case in 0..cases {
        let x = random_contour(&mut rng);
        let got = apply_functionals(&x).unwrap();
        let want = naive(&x);
        for f in Functional::ALL {
            if f == Functional::Centroid && !centroid_well_posed(&x) {
                continue;
            }
            let (g, w) = (got[f], want[f.index()]);
            if !agrees(g, w) {
                mismatches.push(format!(
                    "case {case} (N={}) {}: {g} vs {w}",
                    x.len(),
                    f.name()
                ));
            }
        }
    }
    mismatches
}
