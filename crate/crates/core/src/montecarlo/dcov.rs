//! Squared empirical distance covariance.
//!
//! For pairs (x_k, y_k), k = 1..m, with distance matrices a_kl = |x_k - x_l|
//! and b_kl = |y_k - y_l|, the statistic is the mean of the elementwise
//! product of the double-centered matrices. It is computed here through the
//! moment identity
//!
//! ```text
//! V^2 = S1 + S2 - 2 S3,
//! S1 = (1/m^2) sum_kl a_kl b_kl,
//! S2 = (1/m^2 sum a)(1/m^2 sum b),
//! S3 = (1/m^3) sum_k (row_a_k)(row_b_k),
//! ```
//!
//! which avoids materializing centered matrices; tests pin it against the
//! explicit double-centering route. V^2 is nonnegative, invariant to
//! translating either coordinate, and scales as |a b| under coordinate
//! scalings.

use crate::error::{Error, Result};

/// Squared sample distance covariance of a list of pairs.
pub fn distance_covariance(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::InsufficientData(
            "distance covariance needs at least 2 pairs".into(),
        ));
    }
    let m = pairs.len();
    let mut row_a = vec![0.0; m];
    let mut row_b = vec![0.0; m];
    let mut s1 = 0.0;
    for k in 0..m {
        for l in 0..m {
            let a = (pairs[k].0 - pairs[l].0).abs();
            let b = (pairs[k].1 - pairs[l].1).abs();
            s1 += a * b;
            row_a[k] += a;
            row_b[k] += b;
        }
    }
    let mf = m as f64;
    let total_a: f64 = row_a.iter().sum();
    let total_b: f64 = row_b.iter().sum();
    let s1 = s1 / (mf * mf);
    let s2 = (total_a / (mf * mf)) * (total_b / (mf * mf));
    let s3 = row_a
        .iter()
        .zip(&row_b)
        .map(|(ra, rb)| ra * rb)
        .sum::<f64>()
        / (mf * mf * mf);
    // Nonnegative in exact arithmetic; clamp rounding dust.
    Ok((s1 + s2 - 2.0 * s3).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit double-centering, the independent reference route.
    fn dcov_double_centered(pairs: &[(f64, f64)]) -> f64 {
        let m = pairs.len();
        let mf = m as f64;
        let mut a = vec![0.0; m * m];
        let mut b = vec![0.0; m * m];
        for k in 0..m {
            for l in 0..m {
                a[k * m + l] = (pairs[k].0 - pairs[l].0).abs();
                b[k * m + l] = (pairs[k].1 - pairs[l].1).abs();
            }
        }
        let center = |mat: &mut [f64]| {
            let row_means: Vec<f64> = (0..m)
                .map(|k| (0..m).map(|l| mat[k * m + l]).sum::<f64>() / mf)
                .collect();
            let grand = row_means.iter().sum::<f64>() / mf;
            for k in 0..m {
                for l in 0..m {
                    mat[k * m + l] = mat[k * m + l] - row_means[k] - row_means[l] + grand;
                }
            }
        };
        center(&mut a);
        center(&mut b);
        a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() / (mf * mf)
    }

    #[test]
    fn constant_coordinate_gives_zero() {
        let pairs = [(1.0, 7.0), (2.0, 7.0), (5.0, 7.0)];
        assert_eq!(distance_covariance(&pairs).unwrap(), 0.0);
    }

    #[test]
    fn frozen_oracle_perfect_dependence() {
        // Hand-computed by double centering before implementation: 40/81.
        let pairs = [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)];
        let v = distance_covariance(&pairs).unwrap();
        assert!((v - 40.0 / 81.0).abs() < 1e-14, "{v}");
        assert!((dcov_double_centered(&pairs) - 40.0 / 81.0).abs() < 1e-14);
    }

    #[test]
    fn translation_invariance() {
        let pairs = [(0.3, -1.0), (1.5, 0.4), (-0.7, 2.2), (0.0, 0.0)];
        let shifted: Vec<(f64, f64)> =
            pairs.iter().map(|(x, y)| (x + 5.0, y - 3.0)).collect();
        let a = distance_covariance(&pairs).unwrap();
        let b = distance_covariance(&shifted).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn too_few_pairs_is_an_error() {
        assert!(distance_covariance(&[(0.0, 0.0)]).is_err());
    }

    #[test]
    fn matches_double_centering_on_random_inputs() {
        use crate::rng::substream;
        use rand::Rng;
        let mut rng = substream(77, 0);
        for m in 2..=10usize {
            let pairs: Vec<(f64, f64)> = (0..m)
                .map(|_| (rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0))
                .collect();
            let fast = distance_covariance(&pairs).unwrap();
            let reference = dcov_double_centered(&pairs);
            assert!(
                (fast - reference).abs() <= 1e-12 * reference.abs().max(1.0),
                "m = {m}: {fast} vs {reference}"
            );
        }
    }

    #[test]
    fn scales_as_product_of_coordinate_scalings() {
        let pairs = [(0.3, -1.0), (1.5, 0.4), (-0.7, 2.2), (0.2, 0.9)];
        let scaled: Vec<(f64, f64)> = pairs.iter().map(|(x, y)| (2.0 * x, -4.0 * y)).collect();
        let base = distance_covariance(&pairs).unwrap();
        let big = distance_covariance(&scaled).unwrap();
        assert!((big - 8.0 * base).abs() < 1e-12 * big.max(1.0));
    }
}
