/// z for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

/// Probability that `draws` independent uniform vectors of an `m`-dimensional
/// F₂ space span it: `∏_{i<m} (1 − 2^{i − draws})`.
pub fn span_probability(m: usize, draws: usize) -> f64 {
    if draws < m {
        return 0.0;
    }
    (0..m)
        .map(|i| 1.0 - 2f64.powi(i as i32 - draws as i32))
        .product()
}
