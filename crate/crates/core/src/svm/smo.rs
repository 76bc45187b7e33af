//! Binary soft-margin SVM dual solved by SMO with maximal-violating-pair
//! working set selection.
//!
//! The solver minimises `½·αᵀQα − Σα` subject to `0 ≤ α ≤ C` and
//! `Σ yᵢαᵢ = 0`, with `Q_ij = yᵢyⱼ·xᵢ·xⱼ`. It stops when the largest KKT
//! violation `m(α) − M(α)` drops below the tolerance.

use rayon::prelude::*;

use super::SvmError;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SmoConfig {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SmoConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            tol: 1e-3,
            max_iter: 100_000,
        }
    }
}

/// Trained linear machine: `f(x) = w·x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySvm {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl BinarySvm {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }
}

/// A trained machine plus the dual solution it came from.
#[derive(Debug, Clone)]
pub struct SmoOutcome {
    pub model: BinarySvm,
    pub alpha: Vec<f64>,
    pub iterations: usize,
    /// Dual objective `Σα − ½·αᵀQα` at the solution.
    pub dual_objective: f64,
    /// Dual objective after every iteration when requested.
    pub objective_trace: Vec<f64>,
}

impl SmoOutcome {
    /// Support coefficients `αᵢ·yᵢ`.
    pub fn support_coefficients(&self, y: &[f64]) -> Vec<f64> {
        self.alpha.iter().zip(y).map(|(a, y)| a * y).collect()
    }
}

pub fn train_binary_smo(
    x: &[Vec<f64>],
    y: &[f64],
    cfg: &SmoConfig,
) -> Result<SmoOutcome, SvmError> {
    train_inner(x, y, cfg, false)
}

/// As [`train_binary_smo`], also recording the dual objective per iteration.
pub fn train_binary_smo_traced(
    x: &[Vec<f64>],
    y: &[f64],
    cfg: &SmoConfig,
) -> Result<SmoOutcome, SvmError> {
    train_inner(x, y, cfg, true)
}

fn train_inner(
    x: &[Vec<f64>],
    y: &[f64],
    cfg: &SmoConfig,
    trace: bool,
) -> Result<SmoOutcome, SvmError> {
    let n = x.len();
    if y.len() != n {
        return Err(SvmError::LabelCount {
            labels: y.len(),
            rows: n,
        });
    }
    if !y.iter().all(|&v| v == 1.0 || v == -1.0) {
        return Err(SvmError::InvalidLabel);
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(SvmError::SingleClass);
    }
    let d = x[0].len();
    for (row, r) in x.iter().enumerate() {
        if r.len() != d {
            return Err(SvmError::DimensionMismatch {
                expected: d,
                found: r.len(),
                row: Some(row),
            });
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(SvmError::NonFinite { row });
        }
    }
    if !(cfg.c > 0.0 && cfg.tol > 0.0) {
        return Err(SvmError::InvalidConfig(format!(
            "C = {}, tol = {}",
            cfg.c, cfg.tol
        )));
    }

    // upper triangle in parallel, then mirrored
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (i..n).map(|j| dot(&x[i], &x[j])).collect())
        .collect();
    let mut kernel = vec![vec![0.0; n]; n];
    for (i, row) in upper.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            kernel[i][i + k] = v;
            kernel[i + k][i] = v;
        }
    }
    let q = |i: usize, j: usize| y[i] * y[j] * kernel[i][j];

    let c = cfg.c;
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut objective_trace = Vec::new();
    let mut iterations = 0;

    loop {
        // maximal violating pair
        let (mut i, mut gmax) = (usize::MAX, f64::NEG_INFINITY);
        let (mut j, mut gmin) = (usize::MAX, f64::INFINITY);
        for t in 0..n {
            let v = -y[t] * grad[t];
            let up = (y[t] > 0.0 && alpha[t] < c) || (y[t] < 0.0 && alpha[t] > 0.0);
            let low = (y[t] > 0.0 && alpha[t] > 0.0) || (y[t] < 0.0 && alpha[t] < c);
            if up && v > gmax {
                gmax = v;
                i = t;
            }
            if low && v < gmin {
                gmin = v;
                j = t;
            }
        }
        if i == usize::MAX || j == usize::MAX || gmax - gmin < cfg.tol {
            break;
        }
        if iterations >= cfg.max_iter {
            return Err(SvmError::NoConvergence {
                iterations,
                violation: gmax - gmin,
            });
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        let quad = (q(i, i) + q(j, j) - 2.0 * y[i] * y[j] * q(i, j)).max(1e-12);
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for (t, g) in grad.iter_mut().enumerate() {
            *g += q(t, i) * di + q(t, j) * dj;
        }
        if trace {
            objective_trace.push(dual_objective(&alpha, &grad));
        }
    }

    let bias = -rho(&alpha, &grad, y, c);
    let mut weights = vec![0.0; d];
    for (t, row) in x.iter().enumerate() {
        if alpha[t] > 0.0 {
            let coef = alpha[t] * y[t];
            for (w, v) in weights.iter_mut().zip(row) {
                *w += coef * v;
            }
        }
    }
    Ok(SmoOutcome {
        model: BinarySvm { weights, bias },
        dual_objective: dual_objective(&alpha, &grad),
        alpha,
        iterations,
        objective_trace,
    })
}

/// Four running sums so the loop vectorizes.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(p, q)| p * q)
        .sum();
    for (p, q) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += p[k] * q[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// `Σα − ½αᵀQα`, using `grad = Qα − 1`.
fn dual_objective(alpha: &[f64], grad: &[f64]) -> f64 {
    -0.5 * alpha
        .iter()
        .zip(grad)
        .map(|(a, g)| a * (g - 1.0))
        .sum::<f64>()
}

/// Threshold: mean of `yᵢ·Gᵢ` over free variables, else the midpoint of the
/// feasible interval.
fn rho(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut free, mut sum) = (0usize, 0.0);
    for t in 0..alpha.len() {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum += yg;
        }
    }
    if free > 0 {
        sum / free as f64
    } else {
        (ub + lb) / 2.0
    }
}
