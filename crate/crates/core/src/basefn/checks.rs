//! Empirical feasibility checks and bound estimation on the studentized shell.
//!
//! The shell is the compact set of sorted zero-sum vectors with squared norm
//! n-1 (the range of studentized profiles). Uniform sampling draws a standard
//! normal vector, centers it to zero sum, scales it onto the shell, and
//! sorts: rotation invariance makes the pre-sort law uniform on the sphere
//! slice, and sorting folds it onto the ordered chamber.

use rand::Rng;
use rayon::prelude::*;

use crate::basefn::BaseFunction;
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::report::{VerificationReport, Witness};
use crate::rng::{standard_normal, substream};

/// Relative tolerance of the empirical homogeneity check.
pub const HOMOGENEITY_TOL: f64 = 1e-8;

/// A point of the studentized shell: sorted, zero-sum, squared norm n-1.
#[derive(Debug, Clone)]
pub struct SimplexPoint {
    lambdas: Vec<f64>,
}

impl SimplexPoint {
    /// Validates the three membership constraints at 1e-10.
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        let n = lambdas.len();
        if n < 2 {
            return Err(Error::SampleTooSmall { min: 2, got: n });
        }
        if lambdas.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if lambdas.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::DomainViolation("shell point is not sorted".into()));
        }
        let sum = compensated_sum(&lambdas);
        if sum.abs() > 1e-10 * n as f64 {
            return Err(Error::DomainViolation(format!(
                "shell point does not sum to zero (sum = {sum})"
            )));
        }
        let sumsq: f64 = lambdas.iter().map(|x| x * x).sum();
        let target = (n - 1) as f64;
        if (sumsq - target).abs() > 1e-10 * target {
            return Err(Error::DomainViolation(format!(
                "shell point has squared norm {sumsq}, expected {target}"
            )));
        }
        Ok(SimplexPoint { lambdas })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }
}

/// One uniform draw from the shell.
pub fn sample_simplex(n: usize, rng: &mut impl Rng) -> SimplexPoint {
    assert!(n >= 2, "shell dimension requires n >= 2");
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| standard_normal(rng)).collect();
        let mean = v.iter().sum::<f64>() / n as f64;
        for x in &mut v {
            *x -= mean;
        }
        let norm_sq: f64 = v.iter().map(|x| x * x).sum();
        if norm_sq < 1e-12 {
            continue; // essentially-constant draw, try again
        }
        let scale = ((n - 1) as f64 / norm_sq).sqrt();
        for x in &mut v {
            *x *= scale;
        }
        v.sort_unstable_by(f64::total_cmp);
        // Exact re-centering drift is ~1e-16 per coordinate; fold it back so
        // the membership invariant holds at 1e-10.
        let drift = compensated_sum(&v) / n as f64;
        for x in &mut v {
            *x -= drift;
        }
        return SimplexPoint { lambdas: v };
    }
}

/// Samples the shell and probes definiteness (U > 0 away from the origin)
/// and positive homogeneity (U(s x) = s^p U(x), relative tolerance 1e-8,
/// s drawn from (0, 10]).
///
/// Trials are partitioned by index over independent substreams, so the
/// result is seed-deterministic under any parallelism. Violated sufficient
/// conditions from the catalog are reported as warnings in the metadata
/// without failing the check.
pub fn check_feasibility(u: &BaseFunction, trials: usize, seed: u64) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let n = u.arity();

    struct TrialOutcome {
        min_u: f64,
        min_point: Vec<f64>,
        hom_err: f64,
        hom_point: Vec<f64>,
        hom_scale: f64,
    }

    let outcomes: Vec<TrialOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            let point = sample_simplex(n, &mut rng);
            let value = u.eval_raw(point.lambdas());
            let s = 10.0 * (1.0 - rng.random::<f64>()); // (0, 10]
            let scaled: Vec<f64> = point.lambdas().iter().map(|x| s * x).collect();
            let scaled_value = u.eval_raw(&scaled);
            let expected = s.powf(u.degree()) * value;
            let hom_err = if expected == 0.0 {
                scaled_value.abs()
            } else {
                (scaled_value - expected).abs() / expected.abs()
            };
            TrialOutcome {
                min_u: value,
                min_point: point.lambdas().to_vec(),
                hom_err,
                hom_point: point.lambdas().to_vec(),
                hom_scale: s,
            }
        })
        .collect();

    let worst_min = outcomes
        .iter()
        .min_by(|a, b| a.min_u.total_cmp(&b.min_u))
        .expect("at least one trial");
    let worst_hom = outcomes
        .iter()
        .max_by(|a, b| a.hom_err.total_cmp(&b.hom_err))
        .expect("at least one trial");

    let definiteness_violation = if worst_min.min_u > 0.0 { 0.0 } else { f64::INFINITY };
    let measured = worst_hom.hom_err.max(definiteness_violation);

    let warnings = u.condition_warnings();
    Ok(
        VerificationReport::new(format!("feasibility:{}", u.name()), measured, HOMOGENEITY_TOL)
            .with_witness(Witness::new("min_u", &worst_min.min_point, worst_min.min_u))
            .with_witness(Witness::new(
                "worst_homogeneity",
                &worst_hom.hom_point,
                worst_hom.hom_err,
            ))
            .with_meta("trials", trials)
            .with_meta("seed", seed)
            .with_meta("min_u", worst_min.min_u)
            .with_meta("worst_homogeneity_scale", worst_hom.hom_scale)
            .with_meta("definite", worst_min.min_u > 0.0)
            .with_meta("warnings", warnings),
    )
}

/// Empirical extremes (k, K) of a degree-1 base function over the shell:
/// random starts refined by coordinate-exchange local search.
///
/// Callers with degree p != 1 normalize through [`BaseFunction::unit_degree`]
/// first. The returned k is the empirical minimum, which can sit strictly
/// above analytic lower bounds that are not attained on the shell.
pub fn estimate_bounds(u: &BaseFunction, budget: usize, seed: u64) -> Result<(f64, f64)> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    if (u.degree() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "estimate_bounds requires degree 1, got {}; normalize via unit_degree()",
            u.degree()
        )));
    }
    let n = u.arity();

    let evaluated: Vec<(f64, Vec<f64>)> = (0..budget as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            let point = sample_simplex(n, &mut rng);
            let value = u.eval_raw(point.lambdas());
            (value, point.lambdas().to_vec())
        })
        .collect();

    const STARTS: usize = 4;
    let mut by_value: Vec<usize> = (0..evaluated.len()).collect();
    by_value.sort_by(|&a, &b| evaluated[a].0.total_cmp(&evaluated[b].0));

    let mut k = f64::INFINITY;
    for &idx in by_value.iter().take(STARTS) {
        let (val, refined) = refine(u, &evaluated[idx].1, false);
        let _ = refined;
        k = k.min(val);
    }
    let mut cap = f64::NEG_INFINITY;
    for &idx in by_value.iter().rev().take(STARTS) {
        let (val, _) = refine(u, &evaluated[idx].1, true);
        cap = cap.max(val);
    }
    Ok((k, cap))
}

/// Coordinate-exchange descent/ascent projected back onto the shell:
/// single-coordinate and pair moves, step halving, at most 100 sweeps.
fn refine(u: &BaseFunction, start: &[f64], maximize: bool) -> (f64, Vec<f64>) {
    let n = start.len();
    let better = |candidate: f64, incumbent: f64| {
        if maximize {
            candidate > incumbent
        } else {
            candidate < incumbent
        }
    };

    let mut cur = start.to_vec();
    let mut cur_val = u.eval_raw(&cur);
    let mut step = 0.5;

    for _ in 0..100 {
        let mut best_val = cur_val;
        let mut best_point: Option<Vec<f64>> = None;

        let consider = |cand: &mut Vec<f64>, best_val: &mut f64, best_point: &mut Option<Vec<f64>>| {
            project_to_shell(cand);
            let val = u.eval_raw(cand);
            if better(val, *best_val) {
                *best_val = val;
                *best_point = Some(cand.clone());
            }
        };

        for i in 0..n {
            for sign in [1.0, -1.0] {
                let mut cand = cur.clone();
                cand[i] += sign * step;
                consider(&mut cand, &mut best_val, &mut best_point);
                for j in 0..n {
                    if j != i {
                        let mut cand = cur.clone();
                        cand[i] += sign * step;
                        cand[j] -= sign * step;
                        consider(&mut cand, &mut best_val, &mut best_point);
                    }
                }
            }
        }

        match best_point {
            Some(p) => {
                cur = p;
                cur_val = best_val;
            }
            None => {
                step *= 0.5;
                if step < 1e-10 {
                    break;
                }
            }
        }
    }
    (cur_val, cur)
}

/// Center, rescale to squared norm n-1, and sort.
fn project_to_shell(v: &mut [f64]) {
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    for x in v.iter_mut() {
        *x -= mean;
    }
    let norm_sq: f64 = v.iter().map(|x| x * x).sum();
    if norm_sq < 1e-300 {
        // Collapsed to the origin; nudge back onto the shell deterministically.
        let spread = ((n - 1) as f64 / 2.0).sqrt();
        v.fill(0.0);
        v[0] = -spread;
        v[n - 1] = spread;
        return;
    }
    let scale = ((n - 1) as f64 / norm_sq).sqrt();
    for x in v.iter_mut() {
        *x *= scale;
    }
    v.sort_unstable_by(f64::total_cmp);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_sampler_lands_on_the_shell() {
        let mut rng = substream(7, 0);
        for n in [2usize, 3, 5, 12] {
            let p = sample_simplex(n, &mut rng);
            assert!(SimplexPoint::new(p.lambdas().to_vec()).is_ok(), "n = {n}");
        }
    }

    #[test]
    fn feasibility_gini_passes() {
        let u = BaseFunction::gini(5).unwrap();
        let r = check_feasibility(&u, 10_000, 11).unwrap();
        assert!(r.passed, "measured {}", r.measured);
        assert!(r.metadata["min_u"].as_f64().unwrap() > 0.0);
        assert!(r.metadata["warnings"].as_array().unwrap().is_empty());
    }

    #[test]
    fn feasibility_all_equal_linear_fails_definiteness() {
        // Equal coefficients kill the linear form on every zero-sum point.
        let u = BaseFunction::linear(vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let r = check_feasibility(&u, 500, 3).unwrap();
        assert!(!r.passed);
        assert_eq!(r.metadata["definite"], serde_json::json!(false));
        assert!(!r.metadata["warnings"].as_array().unwrap().is_empty());
    }

    #[test]
    fn feasibility_zero_leading_power_sum_passes_with_warning() {
        // With a_1 = 0 but a_n > 0 the function still cannot vanish on the
        // shell (that would force the largest coordinate to zero), so the
        // empirical check passes while flagging the violated condition.
        let u = BaseFunction::power_sum(vec![0.0, 1.0, 1.0], 1.0).unwrap();
        let r = check_feasibility(&u, 2_000, 5).unwrap();
        assert!(r.passed, "measured {}", r.measured);
        assert_eq!(r.metadata["warnings"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn feasibility_is_seed_deterministic() {
        let u = BaseFunction::range(4).unwrap();
        let a = check_feasibility(&u, 300, 99).unwrap();
        let b = check_feasibility(&u, 300, 99).unwrap();
        assert_eq!(a.measured.to_bits(), b.measured.to_bits());
        assert_eq!(
            a.metadata["min_u"].as_f64().unwrap().to_bits(),
            b.metadata["min_u"].as_f64().unwrap().to_bits()
        );
    }

    #[test]
    fn bounds_for_the_range_at_n3() {
        // Max 2 at the symmetric witness (-1, 0, 1). The empirical minimum is
        // the balanced two-cluster value sqrt(3) = sqrt(n(n-1)/(m(n-m))); the
        // analytic sqrt(2) lower bound holds but is not attained for n >= 3.
        let u = BaseFunction::range(3).unwrap();
        let (k, cap) = estimate_bounds(&u, 4_000, 17).unwrap();
        assert!((cap - 2.0).abs() < 1e-3, "K = {cap}");
        assert!((k - 3f64.sqrt()).abs() < 1e-3, "k = {k}");
        assert!(k >= 2f64.sqrt());
        assert!(k > 0.0 && k <= cap);
    }

    #[test]
    fn bounds_for_gini_sit_inside_the_analytic_sandwich() {
        let n = 3;
        let u = BaseFunction::gini(n).unwrap();
        let (k, cap) = estimate_bounds(&u, 4_000, 29).unwrap();
        let lo = 2.0 * 2f64.sqrt() / (n as f64 * (n as f64 - 1.0));
        let hi = (2.0 * (n as f64 - 1.0)).sqrt();
        assert!(k >= lo - 1e-9, "k = {k} below {lo}");
        assert!(cap <= hi + 1e-9, "K = {cap} above {hi}");
    }

    #[test]
    fn bounds_for_the_sd_preset_are_unity() {
        let u = BaseFunction::sample_sd(5).unwrap();
        let (k, cap) = estimate_bounds(&u, 500, 23).unwrap();
        assert!((k - 1.0).abs() < 1e-9);
        assert!((cap - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bounds_reject_bad_parameters() {
        let u = BaseFunction::variance(4).unwrap();
        assert!(estimate_bounds(&u, 100, 1).is_err()); // degree 2
        assert!(estimate_bounds(&u.unit_degree(), 0, 1).is_err()); // empty budget
        assert!(estimate_bounds(&u.unit_degree(), 100, 1).is_ok());
    }
}
