//! Iterated midpoint quadrature over the admissible coordinate region.
//!
//! Every integral this crate needs has the form
//!
//! ```text
//! I = integral over the region of g(t) / sqrt(f_{n-2}(t)) dt,
//! ```
//!
//! with g continuous and bounded. The weight 1/sqrt(f_{n-2}) blows up on the
//! sphere sum t_k^2 = 1, which the region touches; substituting
//! t_{n-2} = sqrt(f_{n-3}) sin(theta) on the innermost axis turns the
//! weighted measure into plain d(theta) and removes the singularity exactly.
//! The outer axes use the chained closed-form limits with a composite
//! midpoint rule, which never touches the limits themselves.
//!
//! Outermost cells are evaluated in parallel and reduced with a pairwise
//! tree sum, so a fixed cell count gives bit-identical results under any
//! worker count.

use rayon::prelude::*;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::tree_sum;
use crate::transform::{coordinate_limits, density_constant, factorial};

/// A quadrature value with its cell budget and a halved-grid error estimate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub cells: usize,
    pub est_error: f64,
}

/// Integrates g(t) / sqrt(f_{n-2}) over the region with `cells` midpoint
/// cells per axis.
pub fn integrate_region<G>(n: usize, cells: usize, g: &G) -> Result<f64>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "region integration requires n >= 3, got {n}"
        )));
    }
    if cells < 2 {
        return Err(Error::InvalidParameter(
            "quadrature needs at least 2 cells per axis".into(),
        ));
    }
    let dims = n - 2;
    if dims == 1 {
        // Single axis: the substituted axis itself, parallel over cells.
        let partials: Vec<f64> = (0..cells)
            .into_par_iter()
            .map(|c| {
                let mut point = [0.0f64];
                inner_cell_value(n, 1, 0.0, 1.0, cells, c, &mut point, g)
            })
            .collect();
        return Ok(tree_sum(&partials));
    }

    // Parallelize the first axis; recurse sequentially below it.
    let (lo, hi) = coordinate_limits(1, 0.0, 1.0, n);
    let h = (hi - lo) / cells as f64;
    let partials: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|c| {
            let t1 = lo + (c as f64 + 0.5) * h;
            let f1 = (1.0 - t1 * t1).max(0.0);
            let mut point = vec![0.0; dims];
            point[0] = t1;
            nested(n, 2, t1, f1, cells, &mut point, g)
        })
        .collect();
    Ok(tree_sum(&partials) * h)
}

/// Midpoint recursion over axis `k` (1-based); the last axis is substituted.
fn nested<G>(
    n: usize,
    k: usize,
    prev_t: f64,
    f_prev: f64,
    cells: usize,
    point: &mut Vec<f64>,
    g: &G,
) -> f64
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    let dims = n - 2;
    if k == dims {
        let mut acc = 0.0;
        for c in 0..cells {
            acc += inner_cell_value(n, k, prev_t, f_prev, cells, c, point, g);
        }
        return acc;
    }
    let (lo, hi) = coordinate_limits(k, prev_t, f_prev, n);
    if hi <= lo {
        return 0.0;
    }
    let h = (hi - lo) / cells as f64;
    let mut acc = 0.0;
    for c in 0..cells {
        let tk = lo + (c as f64 + 0.5) * h;
        let fk = (f_prev - tk * tk).max(0.0);
        point[k - 1] = tk;
        acc += nested(n, k + 1, tk, fk, cells, point, g);
    }
    acc * h
}

/// One midpoint cell of the innermost, arcsine-substituted axis.
#[allow(clippy::too_many_arguments)]
fn inner_cell_value<G>(
    n: usize,
    k: usize,
    prev_t: f64,
    f_prev: f64,
    cells: usize,
    cell: usize,
    point: &mut [f64],
    g: &G,
) -> f64
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    if f_prev <= 0.0 {
        return 0.0;
    }
    let radius = f_prev.sqrt();
    let (lo, hi) = coordinate_limits(k, prev_t, f_prev, n);
    let theta_lo = (lo / radius).clamp(-1.0, 1.0).asin();
    let theta_hi = (hi / radius).clamp(-1.0, 1.0).asin();
    if theta_hi <= theta_lo {
        return 0.0;
    }
    let h = (theta_hi - theta_lo) / cells as f64;
    let theta = theta_lo + (cell as f64 + 0.5) * h;
    point[k - 1] = radius * theta.sin();
    g(point) * h
}

/// Runs the integral at `cells` and `cells / 2`, reporting their gap as the
/// error estimate.
pub fn integrate_region_refined<G>(n: usize, cells: usize, g: &G) -> Result<QuadratureResult>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    if cells < 4 {
        return Err(Error::InvalidParameter(
            "refined quadrature needs at least 4 cells per axis".into(),
        ));
    }
    let coarse = integrate_region(n, cells / 2, g)?;
    let fine = integrate_region(n, cells, g)?;
    Ok(QuadratureResult {
        value: fine,
        cells,
        est_error: (fine - coarse).abs(),
    })
}

/// Numerically integrates 1 / sqrt(f_{n-2}) over the region. The caller
/// compares against [`normalization_closed_form`]; an under-resolved budget
/// surfaces through `est_error`, not as an error.
pub fn normalization_constant(n: usize, cells: usize) -> Result<QuadratureResult> {
    if !(3..=8).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "normalization quadrature supports n in 3..=8, got {n}"
        )));
    }
    integrate_region_refined(n, cells, &|_t: &[f64]| 1.0)
}

/// 2 pi^((n-1)/2) / (n! G((n-1)/2)): the closed-form value of the weighted
/// region volume, i.e. the reciprocal of the density constant.
pub fn normalization_closed_form(n: usize) -> f64 {
    let half = (n as f64 - 1.0) / 2.0;
    2.0 * std::f64::consts::PI.powf(half)
        / (factorial(n) * statrs::function::gamma::gamma(half))
}

/// Sanity tie between the two closed forms used across the crate.
#[allow(dead_code)]
fn density_constant_is_reciprocal(n: usize) -> f64 {
    density_constant(n) * normalization_closed_form(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_values() {
        // n = 3: 2 pi / (6 * G(1)) = pi / 3; n = 4: pi / 6; n = 5: pi^2 / 60.
        assert!((normalization_closed_form(3) - PI / 3.0).abs() < 1e-14);
        assert!((normalization_closed_form(4) - PI / 6.0).abs() < 1e-14);
        assert!((normalization_closed_form(5) - PI * PI / 60.0).abs() < 1e-14);
        for n in 3..=8 {
            assert!((density_constant_is_reciprocal(n) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_n3_hits_1e6() {
        let r = normalization_constant(3, 2000).unwrap();
        assert!((r.value - PI / 3.0).abs() < 1e-6, "value {}", r.value);
    }

    #[test]
    fn normalization_n4_hits_1e4() {
        let r = normalization_constant(4, 1500).unwrap();
        assert!((r.value - PI / 6.0).abs() < 1e-4, "value {}", r.value);
    }

    #[test]
    fn coarse_grid_still_lands_within_1e3_and_reports_estimate() {
        let r = normalization_constant(3, 64).unwrap();
        assert!((r.value - PI / 3.0).abs() < 1e-3);
        assert_eq!(r.cells, 64);
        assert!(r.est_error.is_finite());
    }

    #[test]
    fn rejects_out_of_range_n_and_budget() {
        assert!(normalization_constant(9, 100).is_err());
        assert!(normalization_constant(2, 100).is_err());
        assert!(integrate_region(3, 1, &|_t: &[f64]| 1.0).is_err());
    }

    #[test]
    fn parallel_reduction_is_bit_stable() {
        let a = integrate_region(4, 257, &|t: &[f64]| 1.0 + t[0] * t[1]).unwrap();
        let b = integrate_region(4, 257, &|t: &[f64]| 1.0 + t[0] * t[1]).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
