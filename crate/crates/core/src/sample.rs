//! Ordered samples, their moments, and studentized profiles.
//!
//! Sorting happens once at construction; everything downstream assumes it.
//! The standard deviation always uses divisor n-1.

use crate::error::{Error, Result};
use crate::numeric::{compensated_mean, compensated_sum, rel_diff, sum_sq_dev};
use crate::report::{VerificationReport, Witness};

/// Relative tolerance for the algebraic identities checked in this module.
pub const IDENTITY_TOL: f64 = 1e-10;

/// A sorted real sample with cached mean and sample standard deviation.
///
/// Moments come from data shifted by the smallest order statistic: the shift
/// is exact for clustered values (Sterbenz), so deviations and the standard
/// deviation carry errors relative to the sample *spread* rather than its
/// magnitude. Large common offsets therefore do not erode the identities
/// checked downstream.
#[derive(Debug, Clone)]
pub struct OrderedSample {
    values: Vec<f64>,
    /// Mean of values - values[0].
    shifted_mean: f64,
    mean: f64,
    sd: f64,
}

impl OrderedSample {
    /// Sorts a raw sample and caches its mean and standard deviation.
    ///
    /// Requires n >= 2 and finite entries; the original order is discarded.
    pub fn new(raw: &[f64]) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::SampleTooSmall {
                min: 2,
                got: raw.len(),
            });
        }
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut values = raw.to_vec();
        values.sort_unstable_by(f64::total_cmp);
        let base = values[0];
        let shifted: Vec<f64> = values.iter().map(|x| x - base).collect();
        let shifted_mean = compensated_mean(&shifted);
        let mean = base + shifted_mean;
        let ss = sum_sq_dev(&shifted, shifted_mean);
        let sd = (ss / (values.len() - 1) as f64).max(0.0).sqrt();
        Ok(OrderedSample {
            values,
            shifted_mean,
            mean,
            sd,
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// The order statistics, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample standard deviation (divisor n-1).
    pub fn sd(&self) -> f64 {
        self.sd
    }

    /// Centered order statistics x_(i) - mean, still ascending and zero-sum.
    /// Evaluated through the shifted route, accurate relative to the spread.
    pub fn centered(&self) -> Vec<f64> {
        let base = self.values[0];
        self.values
            .iter()
            .map(|x| (x - base) - self.shifted_mean)
            .collect()
    }

    /// x_(n) - x_(1).
    pub fn sample_range(&self) -> f64 {
        self.values[self.values.len() - 1] - self.values[0]
    }

    /// Gini mean difference via the ordered linear form
    /// (4 / (n(n-1))) * sum_i (i - (n+1)/2) x_(i), an O(n) computation.
    ///
    /// Agrees with [`gini_double_sum`](Self::gini_double_sum) to high relative
    /// accuracy; the double sum is the O(n^2) reference route.
    pub fn gini_mean_difference(&self) -> f64 {
        let n = self.values.len();
        let shift = (n as f64 + 1.0) / 2.0;
        let terms: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &x)| ((idx + 1) as f64 - shift) * x)
            .collect();
        4.0 * compensated_sum(&terms) / (n as f64 * (n as f64 - 1.0))
    }

    /// Gini mean difference via the full double sum
    /// (1 / (n(n-1))) * sum_i sum_j |x_i - x_j|. Reference implementation.
    pub fn gini_double_sum(&self) -> f64 {
        let n = self.values.len();
        let mut terms = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                terms.push((self.values[i] - self.values[j]).abs());
            }
        }
        2.0 * compensated_sum(&terms) / (n as f64 * (n as f64 - 1.0))
    }

    /// The studentized profile (x_(i) - mean) / sd.
    ///
    /// Requires n >= 3 and sd > 0: a degenerate sample has no scale-free
    /// shape (the profile's constraint set excludes the origin).
    pub fn studentize(&self) -> Result<StudentizedProfile> {
        if self.values.len() < 3 {
            return Err(Error::SampleTooSmall {
                min: 3,
                got: self.values.len(),
            });
        }
        if self.sd <= 0.0 {
            return Err(Error::DegenerateSample);
        }
        let lambdas = self.centered().iter().map(|d| d / self.sd).collect();
        Ok(StudentizedProfile { lambdas })
    }
}

/// The scale-free shape of a sample: ascending, zero-sum, squared norm n-1.
#[derive(Debug, Clone)]
pub struct StudentizedProfile {
    lambdas: Vec<f64>,
}

impl StudentizedProfile {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

/// Checks the three equivalent writings of the centered sum of squares:
/// sum (x_i - mean)^2 = (1/2n) sum_i sum_j (x_i - x_j)^2
///                    = (1/n) sum_{i<j} (x_i - x_j)^2.
///
/// Returns the maximum pairwise relative discrepancy among the three routes.
pub fn pairwise_square_identity_check(raw: &[f64]) -> Result<VerificationReport> {
    if raw.len() < 2 {
        return Err(Error::SampleTooSmall {
            min: 2,
            got: raw.len(),
        });
    }
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = raw.len();
    let base = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let shifted: Vec<f64> = raw.iter().map(|x| x - base).collect();
    let mean = compensated_mean(&shifted);
    let centered = sum_sq_dev(&shifted, mean);

    let mut all_pairs = Vec::with_capacity(n * n);
    for &a in raw {
        for &b in raw {
            let d = a - b;
            all_pairs.push(d * d);
        }
    }
    let full = compensated_sum(&all_pairs) / (2.0 * n as f64);

    let mut upper_pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let d = raw[i] - raw[j];
            upper_pairs.push(d * d);
        }
    }
    let half = compensated_sum(&upper_pairs) / n as f64;

    let measured = rel_diff(centered, full)
        .max(rel_diff(centered, half))
        .max(rel_diff(full, half));

    Ok(VerificationReport::new("pairwise_square_identity", measured, IDENTITY_TOL)
        .with_witness(Witness::new("input", raw, centered))
        .with_meta("centered_sum", centered)
        .with_meta("double_sum_route", full)
        .with_meta("half_sum_route", half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!(
            (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0),
            "{a} vs {b}"
        );
    }

    #[test]
    fn make_ordered_sorts_and_computes_moments() {
        // s^2 = (16/9 + 1/9 + 25/9) / 2 = 7/3
        let s = OrderedSample::new(&[1.0, 4.0, 2.0]).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 4.0]);
        assert_close(s.mean(), 7.0 / 3.0, 1e-15);
        assert_close(s.sd(), (7.0f64 / 3.0).sqrt(), 1e-15);
    }

    #[test]
    fn constant_sample_has_zero_sd() {
        let s = OrderedSample::new(&[5.0, 5.0, 5.0]).unwrap();
        assert_eq!(s.mean(), 5.0);
        assert_eq!(s.sd(), 0.0);
    }

    #[test]
    fn two_point_sample() {
        let s = OrderedSample::new(&[0.0, 1.0]).unwrap();
        assert_eq!(s.values(), &[0.0, 1.0]);
        assert_close(s.mean(), 0.5, 1e-16);
        assert_close(s.sd(), 0.5f64.sqrt(), 1e-16);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            OrderedSample::new(&[1.0]),
            Err(Error::SampleTooSmall { .. })
        ));
        assert!(matches!(
            OrderedSample::new(&[1.0, f64::NAN]),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn studentize_symmetric_three_point() {
        let s = OrderedSample::new(&[-1.0, 0.0, 1.0]).unwrap();
        let p = s.studentize().unwrap();
        assert_eq!(p.lambdas(), &[-1.0, 0.0, 1.0]);
    }

    #[test]
    fn studentize_general_three_point() {
        // deviations (-4/3, -1/3, 5/3) over s = sqrt(7/3)
        let s = OrderedSample::new(&[1.0, 2.0, 4.0]).unwrap();
        let p = s.studentize().unwrap();
        let scale = (7.0f64 / 3.0).sqrt();
        let expected = [-4.0 / 3.0 / scale, -1.0 / 3.0 / scale, 5.0 / 3.0 / scale];
        for (got, want) in p.lambdas().iter().zip(expected) {
            assert_close(*got, want, 1e-14);
        }
    }

    #[test]
    fn studentize_errors() {
        let degenerate = OrderedSample::new(&[2.0, 2.0, 2.0]).unwrap();
        assert!(matches!(degenerate.studentize(), Err(Error::DegenerateSample)));
        let small = OrderedSample::new(&[0.0, 1.0]).unwrap();
        assert!(matches!(
            small.studentize(),
            Err(Error::SampleTooSmall { .. })
        ));
    }

    #[test]
    fn gini_three_point() {
        // double sum 12 / 6 = 2; ordered form (2/3)(-1*1 + 0*2 + 1*4) = 2
        let s = OrderedSample::new(&[1.0, 2.0, 4.0]).unwrap();
        assert_close(s.gini_mean_difference(), 2.0, 1e-14);
        assert_close(s.gini_double_sum(), 2.0, 1e-14);
    }

    #[test]
    fn gini_constant_sample_is_zero() {
        let s = OrderedSample::new(&[3.5, 3.5, 3.5, 3.5]).unwrap();
        assert_eq!(s.gini_mean_difference(), 0.0);
    }

    #[test]
    fn gini_of_pair_equals_range() {
        let s = OrderedSample::new(&[0.0, 1.0]).unwrap();
        assert_eq!(s.gini_mean_difference(), 1.0);
        assert_eq!(s.sample_range(), 1.0);
    }

    #[test]
    fn range_examples() {
        assert_eq!(
            OrderedSample::new(&[-1.0, 0.0, 1.0]).unwrap().sample_range(),
            2.0
        );
        assert_eq!(
            OrderedSample::new(&[1.0, 2.0, 4.0]).unwrap().sample_range(),
            3.0
        );
        // For pairs the variance is half the squared range.
        let s = OrderedSample::new(&[0.0, 1.0]).unwrap();
        assert_close(s.sd() * s.sd(), 0.5 * s.sample_range().powi(2), 1e-15);
    }

    #[test]
    fn pairwise_identity_examples() {
        // (1/3)(1 + 9 + 4) = 14/3 on both sides
        let r = pairwise_square_identity_check(&[1.0, 2.0, 4.0]).unwrap();
        assert!(r.passed);
        assert_close(r.metadata["centered_sum"].as_f64().unwrap(), 14.0 / 3.0, 1e-14);

        let r = pairwise_square_identity_check(&[7.0, 7.0, 7.0]).unwrap();
        assert!(r.passed);

        let r = pairwise_square_identity_check(&[0.0, 1.0]).unwrap();
        assert!(r.passed);
        assert_close(r.metadata["centered_sum"].as_f64().unwrap(), 0.5, 1e-15);
    }

    proptest! {
        #[test]
        fn profile_is_sorted_zero_sum_unit_shell(
            raw in proptest::collection::vec(-1e3f64..1e3, 3..20)
        ) {
            let s = OrderedSample::new(&raw).unwrap();
            prop_assume!(s.sd() > 1e-9);
            let p = s.studentize().unwrap();
            let n = p.n() as f64;
            let sum = compensated_sum(p.lambdas());
            let sumsq: f64 = p.lambdas().iter().map(|l| l * l).sum();
            prop_assert!(p.lambdas().windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(sum.abs() < 1e-10 * n);
            prop_assert!(((sumsq - (n - 1.0)) / (n - 1.0)).abs() < 1e-10);
        }

        #[test]
        fn gini_routes_agree(
            raw in proptest::collection::vec(-1e4f64..1e4, 2..20)
        ) {
            let s = OrderedSample::new(&raw).unwrap();
            let lin = s.gini_mean_difference();
            let dbl = s.gini_double_sum();
            prop_assert!((lin - dbl).abs() <= 1e-12 * lin.abs().max(dbl.abs()).max(1e-6));
        }

        #[test]
        fn location_scale_equivariance(
            raw in proptest::collection::vec(-1e2f64..1e2, 3..12),
            a in 1e-3f64..1e3,
            b in -1e3f64..1e3,
        ) {
            let s = OrderedSample::new(&raw).unwrap();
            let scaled: Vec<f64> = raw.iter().map(|x| a * x + b).collect();
            let t = OrderedSample::new(&scaled).unwrap();
            let tol = 1e-9 * (1.0 + a.abs() + b.abs());
            prop_assert!((t.gini_mean_difference() - a * s.gini_mean_difference()).abs() <= tol);
            prop_assert!((t.sample_range() - a * s.sample_range()).abs() <= tol);
            if s.sd() > 1e-6 {
                let p = s.studentize().unwrap();
                let q = t.studentize().unwrap();
                for (x, y) in p.lambdas().iter().zip(q.lambdas()) {
                    prop_assert!((x - y).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn pairwise_identity_on_random_inputs(
            raw in proptest::collection::vec(-1e3f64..1e3, 2..16)
        ) {
            let r = pairwise_square_identity_check(&raw).unwrap();
            prop_assert!(r.passed, "measured {}", r.measured);
        }
    }
}
