//! The change of variables between an ordered sample and its studentized
//! coordinates (t_1, ..., t_{n-2}, mean, sd).
//!
//! Forward map, for 1 <= i <= n-2 (the prefix sum is empty at i = 1):
//!
//! ```text
//! t_i = sqrt((n-i+1) / ((n-1)(n-i))) * (L_i + (1/(n-i+1)) * sum_{k<i} L_k),
//! L_i = (x_(i) - mean) / sd,   w1 = mean,   w2 = sd.
//! ```
//!
//! The inverse reconstructs the ordered values from the t's together with
//! the radicals f_i = 1 - sum_{k<=i} t_k^2; the trailing radicand f_{n-2}
//! vanishes exactly when the top two order statistics tie, which is the
//! measure-zero boundary of the correspondence. Operations treat that
//! boundary as an explicit error rather than clamping. Under a standard
//! normal parent the t-block carries the closed-form joint density
//! implemented by [`studentized_density`].

pub mod quad;

use crate::error::{Error, Result};
use crate::sample::OrderedSample;

/// Absolute slack applied to each chained region inequality so that forward
/// images and boundary points survive rounding.
const REGION_SLACK: f64 = 1e-12;

/// Coordinates (t, w1, w2) of an ordered sample, with the radical sequence f.
#[derive(Debug, Clone)]
pub struct TransformCoords {
    t: Vec<f64>,
    w1: f64,
    w2: f64,
    f: Vec<f64>,
}

impl TransformCoords {
    /// Validates region membership and w2 > 0, then caches the radicals.
    pub fn new(t: Vec<f64>, w1: f64, w2: f64) -> Result<Self> {
        let n = t.len() + 2;
        if t.is_empty() {
            return Err(Error::InvalidParameter(
                "coordinate vector must have length n - 2 >= 1".into(),
            ));
        }
        if !w1.is_finite() || !w2.is_finite() || t.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if w2 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "scale coordinate w2 must be positive, got {w2}"
            )));
        }
        if !region_membership(&t, n) {
            return Err(Error::OutsideRegion);
        }
        let mut f = Vec::with_capacity(t.len());
        let mut remaining = 1.0;
        for &tk in &t {
            remaining -= tk * tk;
            // Rounding can push the radicand a hair below zero at ties.
            if remaining < 0.0 {
                remaining = 0.0;
            }
            f.push(remaining);
        }
        Ok(TransformCoords { t, w1, w2, f })
    }

    /// Sample size n = len(t) + 2.
    pub fn n(&self) -> usize {
        self.t.len() + 2
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    /// The location coordinate (the sample mean).
    pub fn w1(&self) -> f64 {
        self.w1
    }

    /// The scale coordinate (the sample standard deviation).
    pub fn w2(&self) -> f64 {
        self.w2
    }

    /// Radicals f_i = 1 - sum_{k<=i} t_k^2, nonincreasing in [0, 1].
    pub fn f(&self) -> &[f64] {
        &self.f
    }

    /// The trailing radicand f_{n-2}.
    pub fn f_last(&self) -> f64 {
        *self.f.last().expect("non-empty radical sequence")
    }

    /// True when the coordinates sit on the measure-zero boundary where the
    /// top two reconstructed order statistics coincide.
    pub fn is_boundary(&self) -> bool {
        self.f_last() == 0.0
    }
}

/// Lower and upper limits of the k-th coordinate (1-based) given the previous
/// coordinate and the radical f_{k-1}.
pub(crate) fn coordinate_limits(k: usize, prev_t: f64, f_prev: f64, n: usize) -> (f64, f64) {
    if k == 1 {
        (-1.0, -1.0 / (n as f64 - 1.0))
    } else {
        let root = f_prev.max(0.0).sqrt();
        let stretch = ((n - k + 2) as f64 / (n - k) as f64).sqrt();
        let lo = (stretch * prev_t).max(-root);
        let hi = -root / (n - k) as f64;
        (lo, hi)
    }
}

/// Whether t satisfies every chained inequality of the admissible region
/// (closed; boundary included). Length mismatches are simply not members.
pub fn region_membership(t: &[f64], n: usize) -> bool {
    if n < 3 || t.len() != n - 2 {
        return false;
    }
    let mut f_prev = 1.0;
    let mut prev_t = 0.0;
    for (idx, &tk) in t.iter().enumerate() {
        if !tk.is_finite() {
            return false;
        }
        let (lo, hi) = coordinate_limits(idx + 1, prev_t, f_prev, n);
        if tk < lo - REGION_SLACK || tk > hi + REGION_SLACK {
            return false;
        }
        f_prev -= tk * tk;
        if f_prev < -REGION_SLACK {
            return false;
        }
        f_prev = f_prev.max(0.0);
        prev_t = tk;
    }
    true
}

/// Maps a non-degenerate sample (n >= 3, sd > 0) to its coordinates.
pub fn forward(sample: &OrderedSample) -> Result<TransformCoords> {
    let n = sample.n();
    if n < 3 {
        return Err(Error::SampleTooSmall { min: 3, got: n });
    }
    if sample.sd() <= 0.0 {
        return Err(Error::DegenerateSample);
    }
    let profile = sample.studentize()?;
    let lambdas = profile.lambdas();

    let mut t = Vec::with_capacity(n - 2);
    let mut prefix = 0.0; // sum of lambdas before index i
    for i in 1..=(n - 2) {
        let coef = ((n - i + 1) as f64 / ((n - 1) as f64 * (n - i) as f64)).sqrt();
        let bracket = lambdas[i - 1] + prefix / (n - i + 1) as f64;
        t.push(coef * bracket);
        prefix += lambdas[i - 1];
    }
    let mut coords = TransformCoords::new(t, sample.mean(), sample.sd())?;

    // On the correspondence the trailing radicand equals
    // (x_(n) - x_(n-1))^2 / (2 (n-1) sd^2) exactly. The cumulative form
    // 1 - sum t_k^2 cancels catastrophically when the top pair nearly ties
    // (error ~ eps / sqrt(f)); the gap form is exact in the gap, so the
    // inverse reproduces near-tied samples to full precision.
    let gap = (sample.values()[n - 1] - sample.values()[n - 2]) / sample.sd();
    let direct = gap * gap / (2.0 * (n - 1) as f64);
    let last = coords.f.len() - 1;
    let cap = if last == 0 { 1.0 } else { coords.f[last - 1] };
    coords.f[last] = direct.min(cap);
    Ok(coords)
}

/// Reconstructs the ordered sample from coordinates.
///
/// The two largest values are w1 + w2 sqrt(n-1) (S -+ sqrt(f_{n-2}/2)) where
/// S collects the scaled t's; a vanishing trailing radicand therefore yields
/// a tie rather than an error here.
pub fn inverse(coords: &TransformCoords) -> Result<OrderedSample> {
    let n = coords.n();
    let t = coords.t();
    let scale = coords.w2() * ((n - 1) as f64).sqrt();

    let mut values = Vec::with_capacity(n);
    let mut carried = 0.0; // running sum of t_k / sqrt((n-k)(n-k+1))
    for (idx, &tk) in t.iter().enumerate() {
        let i = idx + 1;
        let lead = ((n - i) as f64 / (n - i + 1) as f64).sqrt();
        values.push(coords.w1() + scale * (lead * tk - carried));
        carried += tk / (((n - i) * (n - i + 1)) as f64).sqrt();
    }
    let half_gap = (coords.f_last() / 2.0).sqrt();
    values.push(coords.w1() + scale * (-carried - half_gap));
    values.push(coords.w1() + scale * (-carried + half_gap));

    OrderedSample::new(&values)
}

/// Reconstruction at (w1, w2) = (0, 1) as a plain vector: the studentized
/// profile carried by interior coordinates, skipping membership validation.
/// Quadrature callers guarantee interior points.
pub(crate) fn unit_profile(t: &[f64]) -> Vec<f64> {
    let n = t.len() + 2;
    let scale = ((n - 1) as f64).sqrt();
    let mut values = Vec::with_capacity(n);
    let mut carried = 0.0;
    let mut sum_sq = 0.0;
    for (idx, &tk) in t.iter().enumerate() {
        let i = idx + 1;
        let lead = ((n - i) as f64 / (n - i + 1) as f64).sqrt();
        values.push(scale * (lead * tk - carried));
        carried += tk / (((n - i) * (n - i + 1)) as f64).sqrt();
        sum_sq += tk * tk;
    }
    let half_gap = ((1.0 - sum_sq).max(0.0) / 2.0).sqrt();
    values.push(scale * (-carried - half_gap));
    values.push(scale * (-carried + half_gap));
    values
}

/// |J| of the inverse map: sqrt(n) (n-1)^((n-1)/2) w2^(n-2) / sqrt(f_{n-2}).
///
/// Errors with [`Error::Singularity`] on the tie boundary f_{n-2} = 0.
pub fn jacobian_abs(coords: &TransformCoords) -> Result<f64> {
    let f_last = coords.f_last();
    if f_last <= 0.0 {
        return Err(Error::Singularity);
    }
    let n = coords.n() as f64;
    Ok(n.sqrt() * (n - 1.0).powf((n - 1.0) / 2.0) * coords.w2().powi(coords.n() as i32 - 2)
        / f_last.sqrt())
}

/// Joint density of the t-block under a standard normal parent:
/// n! G((n-1)/2) / (2 pi^((n-1)/2) sqrt(f_{n-2})) on the region, 0 outside.
///
/// Region points with a vanishing radicand (e.g. t_1 = -1) are genuine
/// singularities and error out.
pub fn studentized_density(t: &[f64], n: usize) -> Result<f64> {
    if !region_membership(t, n) {
        return Ok(0.0);
    }
    let f_last = 1.0 - t.iter().map(|x| x * x).sum::<f64>();
    if f_last <= 0.0 {
        return Err(Error::Singularity);
    }
    Ok(density_constant(n) / f_last.sqrt())
}

/// n! G((n-1)/2) / (2 pi^((n-1)/2)).
pub(crate) fn density_constant(n: usize) -> f64 {
    let nf = factorial(n);
    let half = (n as f64 - 1.0) / 2.0;
    nf * statrs::function::gamma::gamma(half)
        / (2.0 * std::f64::consts::PI.powf(half))
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use proptest::prelude::*;
    use rand::Rng;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0), "{a} vs {b}");
    }

    #[test]
    fn forward_symmetric_three_point() {
        // t_1 = sqrt(3/4) * (-1), f_1 = 1 - 3/4.
        let s = OrderedSample::new(&[-1.0, 0.0, 1.0]).unwrap();
        let c = forward(&s).unwrap();
        assert_close(c.t()[0], -(3f64.sqrt()) / 2.0, 1e-15);
        assert_eq!(c.w1(), 0.0);
        assert_eq!(c.w2(), 1.0);
        assert_close(c.f_last(), 0.25, 1e-14);
    }

    #[test]
    fn forward_first_coordinate_stays_in_band() {
        let mut rng = substream(5, 0);
        for _ in 0..500 {
            let raw: Vec<f64> = (0..3).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
            let s = OrderedSample::new(&raw).unwrap();
            if s.sd() == 0.0 {
                continue;
            }
            let c = forward(&s).unwrap();
            assert!(c.t()[0] >= -1.0 - 1e-12 && c.t()[0] <= -0.5 + 1e-12);
        }
    }

    #[test]
    fn forward_then_inverse_reproduces_the_sample() {
        let s = OrderedSample::new(&[0.0, 0.5, 2.5]).unwrap();
        let back = inverse(&forward(&s).unwrap()).unwrap();
        for (a, b) in s.values().iter().zip(back.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_rejects_degenerate_samples() {
        let s = OrderedSample::new(&[1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(forward(&s), Err(Error::DegenerateSample)));
    }

    #[test]
    fn inverse_symmetric_three_point() {
        let c = TransformCoords::new(vec![-(3f64.sqrt()) / 2.0], 0.0, 1.0).unwrap();
        let s = inverse(&c).unwrap();
        let expected = [-1.0, 0.0, 1.0];
        for (a, b) in s.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn inverse_boundary_collapses_top_pair() {
        let c = TransformCoords::new(vec![-1.0], 0.0, 1.0).unwrap();
        assert!(c.is_boundary());
        let s = inverse(&c).unwrap();
        assert_eq!(s.values()[1], s.values()[2]);
    }

    #[test]
    fn inverse_location_shift() {
        let t = vec![-0.75];
        let base = inverse(&TransformCoords::new(t.clone(), 0.0, 1.0).unwrap()).unwrap();
        let shifted = inverse(&TransformCoords::new(t, 5.0, 1.0).unwrap()).unwrap();
        for (a, b) in base.values().iter().zip(shifted.values()) {
            assert_close(b - a, 5.0, 1e-13);
        }
    }

    #[test]
    fn coords_constructor_rejects_bad_input() {
        assert!(matches!(
            TransformCoords::new(vec![-0.3], 0.0, 1.0),
            Err(Error::OutsideRegion)
        ));
        assert!(TransformCoords::new(vec![-0.75], 0.0, 0.0).is_err());
        assert!(TransformCoords::new(vec![-0.75], 0.0, -1.0).is_err());
    }

    #[test]
    fn jacobian_closed_form_examples() {
        // n = 3, w2 = 1, f_1 = 1/4: sqrt(3) * 2 * 1 * 2 = 4 sqrt(3).
        let c = TransformCoords::new(vec![-(3f64.sqrt()) / 2.0], 0.0, 1.0).unwrap();
        assert_close(jacobian_abs(&c).unwrap(), 4.0 * 3f64.sqrt(), 1e-13);
        // Scales as w2^(n-2).
        let c2 = TransformCoords::new(vec![-(3f64.sqrt()) / 2.0], 0.0, 2.0).unwrap();
        assert_close(jacobian_abs(&c2).unwrap(), 8.0 * 3f64.sqrt(), 1e-13);
        // Singular on the boundary.
        let b = TransformCoords::new(vec![-1.0], 0.0, 1.0).unwrap();
        assert!(matches!(jacobian_abs(&b), Err(Error::Singularity)));
    }

    #[test]
    fn density_examples_n3() {
        // Reduces to 3 / (pi sqrt(1 - t^2)) for n = 3.
        let d = studentized_density(&[-0.8], 3).unwrap();
        assert_close(d, 3.0 / (std::f64::consts::PI * 0.6), 1e-13);
        assert_eq!(studentized_density(&[-0.3], 3).unwrap(), 0.0);
        assert!(matches!(studentized_density(&[-1.0], 3), Err(Error::Singularity)));
    }

    #[test]
    fn region_membership_examples() {
        assert!(region_membership(&[-0.75], 3));
        assert!(region_membership(&[-0.5], 3)); // boundary included
        assert!(!region_membership(&[-0.49], 3));
        assert!(!region_membership(&[-1.01], 3));
        assert!(!region_membership(&[-0.75, -0.5], 3)); // wrong length
    }

    #[test]
    fn forward_images_are_members_for_n4() {
        let mut rng = substream(13, 0);
        for _ in 0..500 {
            let raw: Vec<f64> = (0..4).map(|_| rng.random::<f64>() * 10.0 - 5.0).collect();
            let s = OrderedSample::new(&raw).unwrap();
            if s.sd() == 0.0 {
                continue;
            }
            let c = forward(&s).unwrap();
            assert!(region_membership(c.t(), 4));
        }
    }

    proptest! {
        #[test]
        fn round_trip_across_sizes_and_scales(
            n in 3usize..=10,
            seed in 0u64..1000,
            scale_exp in -3i32..=3,
            offset in -1e3f64..1e3,
        ) {
            let mut rng = substream(seed, n as u64);
            let scale = 10f64.powi(scale_exp);
            let raw: Vec<f64> = (0..n)
                .map(|_| offset + scale * (rng.random::<f64>() * 2.0 - 1.0))
                .collect();
            let s = OrderedSample::new(&raw).unwrap();
            prop_assume!(s.sd() > 1e-13 * s.values().iter().fold(1.0f64, |m, v| m.max(v.abs())));
            let back = inverse(&forward(&s).unwrap()).unwrap();
            let magnitude = s
                .values()
                .iter()
                .fold(1.0f64, |m, v| m.max(v.abs()));
            for (a, b) in s.values().iter().zip(back.values()) {
                prop_assert!((a - b).abs() <= 1e-10 * magnitude);
            }
        }
    }
}
