/// Regression window half-width.
pub const DELTA_WINDOW: usize = 2;

/// Regression (delta) contour with edge replication:
/// `d[t] = Σ_{n=1..W} n·(x[t+n] − x[t−n]) / (2·Σ n²)`.
pub fn delta_regression(contour: &[f64], window: usize) -> Vec<f64> {
    let len = contour.len();
    if len == 0 {
        return Vec::new();
    }
    let norm = 2.0 * (1..=window).map(|n| (n * n) as f64).sum::<f64>();
    let at = |i: isize| contour[i.clamp(0, len as isize - 1) as usize];
    (0..len as isize)
        .map(|t| {
            (1..=window as isize)
                .map(|n| n as f64 * (at(t + n) - at(t - n)))
                .sum::<f64>()
                / norm
        })
        .collect()
}
