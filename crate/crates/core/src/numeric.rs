//! Summation and quantile primitives.
//!
//! Means and second moments go through Neumaier-compensated sums: sample
//! sizes are small but values may carry large offsets, and the identity
//! checks downstream demand 1e-10 relative accuracy. Quadrature partials
//! are reduced with a pairwise tree so parallel evaluation stays bit-stable
//! for a fixed cell count.

/// Neumaier-compensated sum.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Arithmetic mean via compensated summation.
pub fn compensated_mean(values: &[f64]) -> f64 {
    compensated_sum(values) / values.len() as f64
}

/// Compensated sum of squared deviations from `center`.
pub fn sum_sq_dev(values: &[f64], center: f64) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in values {
        let d = x - center;
        let sq = d * d;
        let t = sum + sq;
        if sum.abs() >= sq {
            comp += (sum - t) + sq;
        } else {
            comp += (sq - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Pairwise tree sum with a deterministic reduction order.
pub fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            tree_sum(&values[..mid]) + tree_sum(&values[mid..])
        }
    }
}

/// Linear-interpolation quantile (R-7) on ascending data.
///
/// `p` must lie in [0, 1] and `sorted` must be non-empty.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    debug_assert!((0.0..=1.0).contains(&p));
    let h = (sorted.len() as f64 - 1.0) * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// |a - b| scaled by the larger magnitude; zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let denom = a.abs().max(b.abs());
    if denom == 0.0 {
        0.0
    } else {
        (a - b).abs() / denom
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancellation() {
        // 1e16 + 1 - 1e16 loses the 1 under naive accumulation order.
        let xs = [1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(&xs), 1.0);
    }

    #[test]
    fn tree_sum_matches_plain_on_small_input() {
        let xs = [0.1, 0.2, 0.3, 0.4, 0.5];
        assert!((tree_sum(&xs) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn quantile_endpoints_and_median() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&xs, 0.0), 1.0);
        assert_eq!(quantile_sorted(&xs, 1.0), 4.0);
        assert_eq!(quantile_sorted(&xs, 0.5), 2.5);
    }

    #[test]
    fn rel_diff_handles_zeros() {
        assert_eq!(rel_diff(0.0, 0.0), 0.0);
        assert!((rel_diff(1.0, 2.0) - 0.5).abs() < 1e-15);
    }
}
