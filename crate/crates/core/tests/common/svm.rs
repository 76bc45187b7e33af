//! SVM oracles: KKT audit and exhaustive dual search.

use laughkit::svm::{train_binary_smo, SmoConfig, SmoOutcome};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_problem(rng: &mut ChaCha8Rng, n: usize, d: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    loop {
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let y: Vec<f64> = x
            .iter()
            .map(|r| {
                if r[0] + 0.8 * rng.gen_range(-1.0..1.0) > 0.0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        if y.contains(&1.0) && y.contains(&-1.0) {
            return (x, y);
        }
    }
}

/// Checks the KKT conditions of the dual solution against the collapsed
/// decision function. Returns the first violation found.
pub fn kkt_audit(
    x: &[Vec<f64>],
    y: &[f64],
    out: &SmoOutcome,
    c: f64,
    tol: f64,
) -> Result<(), String> {
    let eq: f64 = out.alpha.iter().zip(y).map(|(a, y)| a * y).sum();
    if eq.abs() > 1e-6 {
        return Err(format!("Σαy = {eq}"));
    }
    for (i, (&a, row)) in out.alpha.iter().zip(x).enumerate() {
        if !(0.0..=c).contains(&a) {
            return Err(format!("α[{i}] = {a} outside [0, C]"));
        }
        let yf = y[i] * out.model.decision(row);
        let ok = if a == 0.0 {
            yf >= 1.0 - tol
        } else if a == c {
            yf <= 1.0 + tol
        } else {
            (yf - 1.0).abs() <= tol
        };
        if !ok {
            return Err(format!("point {i}: α = {a}, y·f = {yf}"));
        }
    }
    Ok(())
}

/// Exact dual maximum by enumerating which variables sit at 0, at C, or
/// strictly between; the free block is solved from its KKT system.
pub fn brute_force_dual(x: &[Vec<f64>], y: &[f64], c: f64) -> f64 {
    let n = x.len();
    let q =
        |i: usize, j: usize| y[i] * y[j] * x[i].iter().zip(&x[j]).map(|(a, b)| a * b).sum::<f64>();
    let objective = |a: &[f64]| {
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += a[i] * a[j] * q(i, j);
            }
        }
        a.iter().sum::<f64>() - 0.5 * quad
    };
    let mut best = f64::NEG_INFINITY;
    for code in 0..3usize.pow(n as u32) {
        let mut state = vec![0u8; n];
        let mut k = code;
        for s in state.iter_mut() {
            *s = (k % 3) as u8;
            k /= 3;
        }
        let mut alpha: Vec<f64> = state
            .iter()
            .map(|&s| if s == 1 { c } else { 0.0 })
            .collect();
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        if !free.is_empty() {
            // [Q_FF y_F; y_Fᵀ 0] [α_F; ν] = [1 − Q_FB·α_B; −y_B·α_B]
            let m = free.len() + 1;
            let mut a = vec![vec![0.0; m + 1]; m];
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    a[r][s] = q(i, j);
                }
                a[r][m - 1] = y[i];
                a[r][m] = 1.0
                    - (0..n)
                        .filter(|&j| state[j] == 1)
                        .map(|j| q(i, j) * c)
                        .sum::<f64>();
                a[m - 1][r] = y[i];
            }
            a[m - 1][m] = -(0..n)
                .filter(|&j| state[j] == 1)
                .map(|j| y[j] * c)
                .sum::<f64>();
            let Some(sol) = solve(a) else { continue };
            for (r, &i) in free.iter().enumerate() {
                alpha[i] = sol[r];
            }
            if free
                .iter()
                .any(|&i| alpha[i] < -1e-12 || alpha[i] > c + 1e-12)
            {
                continue;
            }
        }
        let eq: f64 = alpha.iter().zip(y).map(|(a, y)| a * y).sum();
        if eq.abs() > 1e-9 {
            continue;
        }
        best = best.max(objective(&alpha));
    }
    best
}

pub fn solve(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let m = a.len();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in col..=m {
                    a[r][k] -= f * a[col][k];
                }
            }
        }
    }
    Some((0..m).map(|r| a[r][m] / a[r][r]).collect())
}

pub fn xor_training_accuracy() -> f64 {
    let x = vec![
        vec![0.0, 0.0],
        vec![1.0, 1.0],
        vec![0.0, 1.0],
        vec![1.0, 0.0],
    ];
    let y = vec![1.0, 1.0, -1.0, -1.0];
    let out = train_binary_smo(&x, &y, &SmoConfig::default()).unwrap();
    let correct = x
        .iter()
        .zip(&y)
        .filter(|(r, &l)| out.model.decision(r) * l > 0.0)
        .count();
    correct as f64 / 4.0
}
