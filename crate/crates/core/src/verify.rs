//! The inequality suite, the sigma identities, and the numerical consistency
//! check of the characterizing integro-functional equation.
//!
//! The order-correlation bound uses divisor-n moments, unlike the sample
//! standard deviation elsewhere (divisor n-1); the two conventions live in
//! separate operations so they cannot silently mix.

use rand::Rng;
use rayon::prelude::*;

use crate::basefn::BaseFunction;
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, rel_diff};
use crate::report::{VerificationReport, Witness};
use crate::rng::{standard_normal, substream};
use crate::sample::{pairwise_square_identity_check, OrderedSample};
use crate::transform::quad::{integrate_region, normalization_closed_form, normalization_constant};
use crate::transform::{forward, inverse, jacobian_abs, region_membership, unit_profile, TransformCoords};

/// Tolerance of the strict inequality checks (rounding allowance only).
pub const INEQUALITY_TOL: f64 = 1e-12;

/// Hard cap on the integro-functional consistency tolerance for the
/// reference-density pass.
pub const ANOSOV_TOL_CAP: f64 = 1e-4;

/// Minimum discrepancy a negative-control density must exhibit.
pub const NEGATIVE_CONTROL_FLOOR: f64 = 1e-2;

// ---------------------------------------------------------------------------
// Order-correlation (co-sorted) lower bound
// ---------------------------------------------------------------------------

/// The order-correlation ratio Cov(mu, lambda) / (s(mu) s(lambda)) of two
/// co-sorted vectors, computed with divisor-n moments.
///
/// For sorted non-constant vectors of length n the ratio is bounded below by
/// 1/(n-1), with equality exactly when n = 2 or one vector has its extreme
/// entry alone on one side and the other vector mirrors that split.
pub fn benedetti(mu: &[f64], lambda: &[f64]) -> Result<f64> {
    let n = mu.len();
    if n < 2 {
        return Err(Error::SampleTooSmall { min: 2, got: n });
    }
    if lambda.len() != n {
        return Err(Error::InvalidParameter(format!(
            "vectors must share a length, got {} and {}",
            n,
            lambda.len()
        )));
    }
    if mu.iter().chain(lambda).any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    for (label, v) in [("first", mu), ("second", lambda)] {
        if v.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::DomainViolation(format!(
                "{label} vector is not sorted ascending"
            )));
        }
        if v.iter().all(|&x| x == v[0]) {
            return Err(Error::DegenerateSample);
        }
    }
    let nf = n as f64;
    let mu_bar = compensated_sum(mu) / nf;
    let la_bar = compensated_sum(lambda) / nf;
    let mut cov_terms = Vec::with_capacity(n);
    let mut mu_sq = Vec::with_capacity(n);
    let mut la_sq = Vec::with_capacity(n);
    for (a, b) in mu.iter().zip(lambda) {
        let da = a - mu_bar;
        let db = b - la_bar;
        cov_terms.push(da * db);
        mu_sq.push(da * da);
        la_sq.push(db * db);
    }
    let cov = compensated_sum(&cov_terms) / nf;
    let s_mu = (compensated_sum(&mu_sq) / nf).sqrt();
    let s_la = (compensated_sum(&la_sq) / nf).sqrt();
    Ok(cov / (s_mu * s_la))
}

/// 1 / (n - 1).
pub fn benedetti_lower_bound(n: usize) -> f64 {
    1.0 / (n as f64 - 1.0)
}

// ---------------------------------------------------------------------------
// Range and pairwise-power ratio bounds
// ---------------------------------------------------------------------------

/// Checks sqrt(2) <= range/sd <= sqrt(2(n-1)) for a non-degenerate sample.
pub fn range_inequality_check(sample: &OrderedSample) -> Result<VerificationReport> {
    if sample.sd() <= 0.0 {
        return Err(Error::DegenerateSample);
    }
    let n = sample.n() as f64;
    let ratio = sample.sample_range() / sample.sd();
    let lo = 2f64.sqrt();
    let hi = (2.0 * (n - 1.0)).sqrt();
    let measured = (lo - ratio).max(ratio - hi);
    Ok(
        VerificationReport::new("range_ratio_bounds", measured, INEQUALITY_TOL)
            .with_witness(Witness::new("sample", sample.values(), ratio))
            .with_meta("ratio", ratio)
            .with_meta("lower", lo)
            .with_meta("upper", hi),
    )
}

/// Checks the pairwise-power ratio sandwich
/// (a_1n + a_n1) sqrt(2)^p <= Z_n / sd^p <= (max off-diagonal) n(n-1) sqrt(2(n-1))^p,
/// and for the Gini configuration additionally
/// 2 sqrt(2) / (n(n-1)) <= G_n / sd <= sqrt(2(n-1)).
pub fn definite_ratio_bounds_check(
    u: &BaseFunction,
    sample: &OrderedSample,
) -> Result<VerificationReport> {
    let (coeffs, p) = u.pairwise_coeffs().ok_or_else(|| {
        Error::InvalidParameter("ratio bounds apply to the pairwise-power family only".into())
    })?;
    if sample.sd() <= 0.0 {
        return Err(Error::DegenerateSample);
    }
    let n = u.arity();
    if sample.n() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: sample.n(),
        });
    }
    let nf = n as f64;
    let z = u.statistic(sample)?;
    let ratio = z / sample.sd().powf(p);

    let corner = coeffs[n - 1] + coeffs[(n - 1) * n];
    let max_offdiag = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| coeffs[i * n + j])
        .fold(0.0f64, f64::max);
    let lo = corner * 2f64.sqrt().powf(p);
    let hi = max_offdiag * nf * (nf - 1.0) * (2.0 * (nf - 1.0)).sqrt().powf(p);
    let mut measured = (lo - ratio).max(ratio - hi);

    let gini_coeff = 1.0 / (nf * (nf - 1.0));
    let is_gini = p == 1.0 && coeffs.iter().all(|&c| rel_diff(c, gini_coeff) < 1e-12);
    let mut report_meta: Vec<(&str, f64)> = vec![("ratio", ratio), ("lower", lo), ("upper", hi)];
    if is_gini {
        let g_ratio = z / sample.sd();
        let g_lo = 2.0 * 2f64.sqrt() / (nf * (nf - 1.0));
        let g_hi = (2.0 * (nf - 1.0)).sqrt();
        measured = measured.max(g_lo - g_ratio).max(g_ratio - g_hi);
        report_meta.push(("gini_lower", g_lo));
        report_meta.push(("gini_upper", g_hi));
    }

    let mut report =
        VerificationReport::new("pairwise_ratio_bounds", measured, INEQUALITY_TOL)
            .with_witness(Witness::new("sample", sample.values(), ratio))
            .with_meta("gini_configuration", is_gini);
    for (k, v) in report_meta {
        report = report.with_meta(k, v);
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Integro-functional consistency (the characterization identity)
// ---------------------------------------------------------------------------

/// Reference densities for the consistency check. The standard normal must
/// satisfy the identity; any other continuous positive density serves as a
/// negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceDensity {
    StandardNormal,
    StandardLaplace,
}

impl ReferenceDensity {
    pub fn pdf(&self, x: f64) -> f64 {
        match self {
            ReferenceDensity::StandardNormal => {
                (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
            }
            ReferenceDensity::StandardLaplace => 0.5 * (-x.abs()).exp(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ReferenceDensity::StandardNormal => "standard_normal",
            ReferenceDensity::StandardLaplace => "standard_laplace",
        }
    }
}

/// Evaluates both sides of the integro-functional identity
///
/// ```text
/// int (1/U)^{n-1} f^{-1/2} prod_i f_X(xbar + (z/U) l_i(t)) dt
///   = C f_X(xbar)^n int (1/U)^{n-1} f^{-1/2} prod_i f_X((z/U) l_i(t)) dt,
/// ```
///
/// with C = 1 / f_X(0)^n, over every (xbar, z) grid pair, and reports the
/// worst relative gap. The profile l(t) comes from the transform's inverse at
/// (w1, w2) = (0, 1) — the single place this module couples to the transform.
///
/// The pass tolerance is a self-refinement estimate (the grid is halved and
/// the discrepancies compared), hard-capped at 1e-4.
pub fn anosov_equation_check(
    u: &BaseFunction,
    xbar_grid: &[f64],
    z_grid: &[f64],
    cells: usize,
    density: ReferenceDensity,
) -> Result<VerificationReport> {
    if (u.degree() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(
            "the consistency check requires a degree-1 base function".into(),
        ));
    }
    let n = u.arity();
    if n < 3 {
        return Err(Error::InvalidParameter(
            "the consistency check requires n >= 3".into(),
        ));
    }
    if xbar_grid.is_empty() || z_grid.is_empty() {
        return Err(Error::InvalidParameter("grids must be non-empty".into()));
    }
    if z_grid.iter().any(|&z| z < 0.0) {
        return Err(Error::InvalidParameter("z grid must be nonnegative".into()));
    }

    // (xbar, z, lhs, rhs, relative discrepancy) per grid point.
    type GridRow = (f64, f64, f64, f64, f64);
    let discrepancies_at = |cell_count: usize| -> Result<Vec<GridRow>> {
        let mut rows = Vec::with_capacity(xbar_grid.len() * z_grid.len());
        let capital_c = density.pdf(0.0).powi(n as i32).recip();
        for &z in z_grid {
            let side = |xbar: f64| -> Result<f64> {
                integrate_region(n, cell_count, &|t: &[f64]| {
                    let profile = unit_profile(t);
                    let u_val = u.eval_raw(&profile);
                    let mut prod = (1.0 / u_val).powi(n as i32 - 1);
                    let rate = z / u_val;
                    for l in &profile {
                        prod *= density.pdf(xbar + rate * l);
                    }
                    prod
                })
            };
            let rhs_integral = side(0.0)?;
            for &xbar in xbar_grid {
                let lhs = side(xbar)?;
                let rhs = capital_c * density.pdf(xbar).powi(n as i32) * rhs_integral;
                rows.push((xbar, z, lhs, rhs, rel_diff(lhs, rhs)));
            }
        }
        Ok(rows)
    };

    let fine = discrepancies_at(cells)?;
    let coarse = discrepancies_at((cells / 2).max(2))?;
    let measured = fine.iter().map(|r| r.4).fold(0.0f64, f64::max);
    let est = fine
        .iter()
        .zip(&coarse)
        .map(|(a, b)| (a.4 - b.4).abs())
        .fold(0.0f64, f64::max);
    let tolerance = ANOSOV_TOL_CAP.min((10.0 * est).max(1e-10));

    let worst = fine
        .iter()
        .max_by(|a, b| a.4.total_cmp(&b.4))
        .expect("non-empty grid");
    let grid_json: Vec<serde_json::Value> = fine
        .iter()
        .map(|(xbar, z, lhs, rhs, disc)| {
            serde_json::json!({
                "xbar": xbar, "z": z, "lhs": lhs, "rhs": rhs, "discrepancy": disc
            })
        })
        .collect();

    Ok(VerificationReport::new(
        format!("anosov_consistency:{}:{}", u.name(), density.name()),
        measured,
        tolerance,
    )
    .with_witness(Witness::new("worst_grid_point", &[worst.0, worst.1], worst.4))
    .with_meta("cells", cells)
    .with_meta("refinement_estimate", est)
    .with_meta("density", density.name())
    .with_meta("grid", grid_json))
}

/// Wraps the consistency check as a negative control: the report passes when
/// the discrepancy *exceeds* [`NEGATIVE_CONTROL_FLOOR`] at some grid point.
/// `measured` stores the shortfall below the floor (0 when the control behaves).
pub fn anosov_negative_control(
    u: &BaseFunction,
    xbar_grid: &[f64],
    z_grid: &[f64],
    cells: usize,
    density: ReferenceDensity,
) -> Result<VerificationReport> {
    let inner = anosov_equation_check(u, xbar_grid, z_grid, cells, density)?;
    let disc = inner.measured;
    let shortfall = (NEGATIVE_CONTROL_FLOOR - disc).max(0.0);
    Ok(VerificationReport::new(
        format!("anosov_negative_control:{}:{}", u.name(), density.name()),
        shortfall,
        0.0,
    )
    .with_meta("max_discrepancy", disc)
    .with_meta("required_floor", NEGATIVE_CONTROL_FLOOR)
    .with_meta("cells", cells))
}

// ---------------------------------------------------------------------------
// Sigma identities
// ---------------------------------------------------------------------------

/// At random region points, checks the normalized-profile identities
/// sum_i sigma_i = 0 and sum_i sigma_i^2 = (n-1)/U(l)^2 with
/// sigma_i = l_i / U(l). Points are drawn on the shell and pushed through
/// forward and inverse, exercising the full coordinate loop.
pub fn sigma_conditions_check(
    u: &BaseFunction,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let n = u.arity();
    if n < 3 {
        return Err(Error::InvalidParameter(
            "sigma identities require n >= 3".into(),
        ));
    }

    let worst: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            let shell = crate::basefn::sample_simplex(n, &mut rng);
            let sample = OrderedSample::new(shell.lambdas()).expect("valid shell point");
            let coords = forward(&sample).expect("shell points are non-degenerate");
            let unit = TransformCoords::new(coords.t().to_vec(), 0.0, 1.0)
                .expect("forward image stays in the region");
            let profile = inverse(&unit).expect("interior coordinates invert");
            let u_val = u.eval_raw(profile.values());
            if u_val <= 0.0 {
                return f64::INFINITY;
            }
            let sigmas: Vec<f64> = profile.values().iter().map(|l| l / u_val).collect();
            let sum = compensated_sum(&sigmas);
            let sum_sq: f64 = sigmas.iter().map(|s| s * s).sum();
            let target = (n as f64 - 1.0) / (u_val * u_val);
            sum.abs().max((sum_sq - target).abs() / target)
        })
        .collect();

    let measured = worst.iter().copied().fold(0.0f64, f64::max);
    Ok(
        VerificationReport::new(format!("sigma_conditions:{}", u.name()), measured, 1e-10)
            .with_meta("trials", trials)
            .with_meta("seed", seed),
    )
}

// ---------------------------------------------------------------------------
// Finite-difference Jacobian comparison
// ---------------------------------------------------------------------------

/// |det| of the central-difference Jacobian of the inverse map at `coords`.
/// Interior points only: the step must stay inside the region.
pub fn jacobian_fd(coords: &TransformCoords) -> Result<f64> {
    let n = coords.n();
    let dim = n; // t_1..t_{n-2}, w1, w2
    let mut base: Vec<f64> = coords.t().to_vec();
    base.push(coords.w1());
    base.push(coords.w2());

    let eval = |v: &[f64]| -> Result<Vec<f64>> {
        let c = TransformCoords::new(v[..n - 2].to_vec(), v[n - 2], v[n - 1])?;
        Ok(inverse(&c)?.values().to_vec())
    };

    let mut jac = vec![0.0; dim * dim];
    for j in 0..dim {
        let h = 1e-6 * base[j].abs().max(1.0);
        let mut plus = base.clone();
        plus[j] += h;
        let mut minus = base.clone();
        minus[j] -= h;
        let fp = eval(&plus)?;
        let fm = eval(&minus)?;
        for i in 0..dim {
            jac[i * dim + j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    Ok(det_abs(&mut jac, dim))
}

/// |det| via partial-pivot LU elimination.
fn det_abs(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| a[r1 * n + col].abs().total_cmp(&a[r2 * n + col].abs()))
            .expect("non-empty column");
        let pivot = a[pivot_row * n + col];
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
        }
        det *= a[col * n + col];
        for row in (col + 1)..n {
            let factor = a[row * n + col] / a[col * n + col];
            for k in col..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
        }
    }
    det.abs()
}

/// Draws a random non-degenerate sample of size n from the standard normal.
fn random_sample(n: usize, rng: &mut impl Rng) -> OrderedSample {
    loop {
        let raw: Vec<f64> = (0..n).map(|_| standard_normal(rng)).collect();
        let s = OrderedSample::new(&raw).expect("finite draws");
        if s.sd() > 0.0 {
            return s;
        }
    }
}

/// A random interior coordinate point: rejects draws too close to the region
/// boundary for finite-difference steps to stay inside.
fn random_interior_coords(n: usize, rng: &mut impl Rng) -> TransformCoords {
    loop {
        let coords = forward(&random_sample(n, rng)).expect("non-degenerate");
        if coords.f_last() < 0.05 {
            continue;
        }
        let mut safe = true;
        let mut f_prev = 1.0;
        let mut prev_t = 0.0;
        for (idx, &tk) in coords.t().iter().enumerate() {
            let (lo, hi) = crate::transform::coordinate_limits(idx + 1, prev_t, f_prev, n);
            if tk - lo < 1e-3 || hi - tk < 1e-3 {
                safe = false;
                break;
            }
            f_prev -= tk * tk;
            prev_t = tk;
        }
        if safe {
            return coords;
        }
    }
}

// ---------------------------------------------------------------------------
// Named suites (consumed by the CLI)
// ---------------------------------------------------------------------------

/// Options shared by the randomized suites.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub seed: u64,
    pub trials: usize,
    pub cells: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0x5EED,
            trials: 20_000,
            cells: 2_000,
        }
    }
}

/// Order-correlation, range, Gini, and sum-of-squares identity checks over a
/// random normal corpus, n in 2..=8.
pub fn inequality_suite(opts: &SuiteOptions) -> Vec<VerificationReport> {
    let ns: Vec<usize> = (2..=8).collect();

    let mut worst_benedetti = f64::NEG_INFINITY;
    let mut worst_range = f64::NEG_INFINITY;
    let mut worst_gini = f64::NEG_INFINITY;
    let mut worst_identity = 0.0f64;
    let mut worst_witness_gap = 0.0f64;

    for &n in &ns {
        let per_n: Vec<(f64, f64, f64, f64)> = (0..opts.trials as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = substream(opts.seed, (n as u64) << 32 | i);
                let s = random_sample(n, &mut rng);
                let mu = random_sample(n, &mut rng);
                let ratio = benedetti(mu.values(), s.values()).expect("non-degenerate draws");
                let ben_violation = benedetti_lower_bound(n) - ratio;

                let range_ratio = s.sample_range() / s.sd();
                let nf = n as f64;
                let range_violation =
                    (2f64.sqrt() - range_ratio).max(range_ratio - (2.0 * (nf - 1.0)).sqrt());

                let gini_ratio = s.gini_mean_difference() / s.sd();
                let mut gini_violation = (2.0 * 2f64.sqrt() / (nf * (nf - 1.0)) - gini_ratio)
                    .max(gini_ratio - (2.0 * (nf - 1.0)).sqrt());
                if n >= 3 {
                    // Strictly below the range for any sample with two distinct values.
                    gini_violation =
                        gini_violation.max(s.gini_mean_difference() - s.sample_range());
                }

                let identity = pairwise_square_identity_check(s.values())
                    .expect("finite sample")
                    .measured;
                (ben_violation, range_violation, gini_violation, identity)
            })
            .collect();
        for (b, r, g, i) in per_n {
            worst_benedetti = worst_benedetti.max(b);
            worst_range = worst_range.max(r);
            worst_gini = worst_gini.max(g);
            worst_identity = worst_identity.max(i);
        }

        // The symmetric witness attains the upper range bound exactly.
        let mut witness = vec![0.0; n];
        witness[0] = -1.0;
        witness[n - 1] = 1.0;
        let w = OrderedSample::new(&witness).expect("witness");
        let gap = (w.sample_range() / w.sd() - (2.0 * (n as f64 - 1.0)).sqrt()).abs();
        worst_witness_gap = worst_witness_gap.max(gap);
    }

    vec![
        VerificationReport::new("benedetti_lower_bound", worst_benedetti, INEQUALITY_TOL)
            .with_meta("trials_per_n", opts.trials)
            .with_meta("seed", opts.seed),
        VerificationReport::new("range_ratio_bounds", worst_range, INEQUALITY_TOL)
            .with_meta("trials_per_n", opts.trials),
        VerificationReport::new("gini_ratio_bounds", worst_gini, INEQUALITY_TOL)
            .with_meta("trials_per_n", opts.trials),
        VerificationReport::new("range_upper_witness", worst_witness_gap, INEQUALITY_TOL),
        VerificationReport::new("pairwise_square_identity", worst_identity, 1e-10)
            .with_meta("trials_per_n", opts.trials),
    ]
}

/// Round-trip, region-membership, and Jacobian checks, n in 3..=10.
pub fn transform_suite(opts: &SuiteOptions) -> Vec<VerificationReport> {
    let mut worst_roundtrip = 0.0f64;
    let mut outside = 0usize;
    for n in 3..=10usize {
        let per_n: Vec<(f64, bool)> = (0..opts.trials as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = substream(opts.seed, (n as u64) << 32 | i);
                let s = random_sample(n, &mut rng);
                let coords = forward(&s).expect("non-degenerate");
                let member = region_membership(coords.t(), n);
                let back = inverse(&coords).expect("forward image inverts");
                let magnitude = s.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
                let err = s
                    .values()
                    .iter()
                    .zip(back.values())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
                    / magnitude;
                (err, member)
            })
            .collect();
        for (err, member) in per_n {
            worst_roundtrip = worst_roundtrip.max(err);
            if !member {
                outside += 1;
            }
        }
    }

    let fd_points = 200usize;
    let worst_jacobian: f64 = (3..=8usize)
        .flat_map(|n| (0..fd_points as u64).map(move |i| (n, i)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(n, i)| {
            let mut rng = substream(opts.seed ^ 0xFD, (n as u64) << 32 | i);
            let coords = random_interior_coords(n, &mut rng);
            let closed = jacobian_abs(&coords).expect("interior point");
            let fd = jacobian_fd(&coords).expect("interior point");
            rel_diff(closed, fd)
        })
        .reduce(|| 0.0, f64::max);

    vec![
        VerificationReport::new("transform_round_trip", worst_roundtrip, 1e-10)
            .with_meta("trials_per_n", opts.trials)
            .with_meta("seed", opts.seed),
        VerificationReport::new("forward_region_membership", outside as f64, 0.0)
            .with_meta("trials_per_n", opts.trials),
        VerificationReport::new("jacobian_finite_difference", worst_jacobian, 1e-5)
            .with_meta("points_per_n", fd_points),
    ]
}

/// Tolerance of the density normalization at a given sample size.
pub fn density_tolerance(n: usize) -> f64 {
    match n {
        3 => 1e-6,
        4 => 1e-4,
        _ => 1e-3,
    }
}

/// Quadrature of the studentized density against exact unit mass.
pub fn density_suite(n: usize, cells: usize) -> Result<Vec<VerificationReport>> {
    let quad = normalization_constant(n, cells)?;
    let closed = normalization_closed_form(n);
    let unit_gap = (quad.value / closed - 1.0).abs();
    Ok(vec![VerificationReport::new(
        format!("density_normalization_n{n}"),
        unit_gap,
        density_tolerance(n),
    )
    .with_meta("integral", quad.value)
    .with_meta("closed_form", closed)
    .with_meta("cells", quad.cells)
    .with_meta("est_error", quad.est_error)])
}

/// Consistency pass for the standard normal plus the Laplace negative
/// control, for the range and Gini base functions.
pub fn anosov_suite(n: usize, cells: usize) -> Result<Vec<VerificationReport>> {
    let xbar_grid = [-1.0, 0.0, 1.5];
    let z_grid = [0.0, 0.5, 2.0];
    let mut reports = Vec::new();
    for u in [BaseFunction::range(n)?, BaseFunction::gini(n)?] {
        reports.push(anosov_equation_check(
            &u,
            &xbar_grid,
            &z_grid,
            cells,
            ReferenceDensity::StandardNormal,
        )?);
        reports.push(anosov_negative_control(
            &u,
            &xbar_grid,
            &z_grid,
            cells,
            ReferenceDensity::StandardLaplace,
        )?);
    }
    Ok(reports)
}
