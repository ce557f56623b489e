//! Bulk property checks that back the module contracts: route agreement at
//! corpus scale, strictness of bounds, extremal-search sweeps, and
//! independence of results from the rayon worker count.

use rand::Rng;
use rayon::prelude::*;

use ordstat::{
    benedetti, estimate_bounds, integrate_region, independence_test_simulated,
    pairwise_square_identity_check, sample_simplex, substream, tstar_table, BaseFunction,
    DistributionSpec, OrderedSample,
};

fn normal_draws(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let spec = DistributionSpec::standard_normal();
    (0..n).map(|_| spec.draw(rng)).collect()
}

#[test]
fn gini_routes_agree_at_corpus_scale() {
    // 1e5 samples per n in 2..=20, relative agreement 1e-12.
    let worst = (2..=20usize)
        .flat_map(|n| (0..100_000u64).map(move |i| (n, i)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(n, i)| {
            let mut rng = substream(0x61, ((n as u64) << 40) | i);
            let s = OrderedSample::new(&normal_draws(n, &mut rng)).unwrap();
            let lin = s.gini_mean_difference();
            let dbl = s.gini_double_sum();
            (lin - dbl).abs() / lin.abs().max(dbl.abs()).max(1e-300)
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst < 1e-12, "worst relative gap {worst:.3e}");
}

#[test]
fn sum_of_squares_identity_at_corpus_scale() {
    let worst = (2..=12usize)
        .flat_map(|n| (0..20_000u64).map(move |i| (n, i)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(n, i)| {
            let mut rng = substream(0x62, ((n as u64) << 40) | i);
            pairwise_square_identity_check(&normal_draws(n, &mut rng))
                .unwrap()
                .measured
        })
        .reduce(|| 0.0, f64::max);
    assert!(worst < 1e-10, "worst discrepancy {worst:.3e}");
}

#[test]
fn range_lower_bound_is_strict_for_n_at_least_3() {
    // The sqrt(2) bound is attained only by constant samples, which never
    // arise from continuous draws; the empirical minimum sits near the
    // balanced two-cluster value, well above it.
    for n in 3..=12usize {
        let min_ratio = (0..20_000u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = substream(0x63, ((n as u64) << 40) | i);
                let s = OrderedSample::new(&normal_draws(n, &mut rng)).unwrap();
                s.sample_range() / s.sd()
            })
            .reduce(|| f64::INFINITY, f64::min);
        assert!(min_ratio > 2f64.sqrt(), "n = {n}: min ratio {min_ratio}");
    }
}

#[test]
fn linear_forms_dominate_the_order_correlation_bound() {
    // For a nondecreasing coefficient vector a and shell point l,
    // sum a_i l_i >= (1/(n-1)) ||a - abar|| ||l||, pointwise.
    let mut rng = substream(0x64, 0);
    for _ in 0..2_000 {
        let n = 3 + (rng.random::<u64>() % 8) as usize;
        let mut coeffs: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        coeffs.sort_unstable_by(f64::total_cmp);
        if coeffs.iter().all(|&c| c == coeffs[0]) {
            continue;
        }
        let u = BaseFunction::linear(coeffs.clone()).unwrap();
        let point = sample_simplex(n, &mut rng);
        let value = u.evaluate(point.lambdas()).unwrap();
        let abar = coeffs.iter().sum::<f64>() / n as f64;
        let coeff_norm = coeffs.iter().map(|c| (c - abar) * (c - abar)).sum::<f64>().sqrt();
        let point_norm = ((n - 1) as f64).sqrt();
        let bound = coeff_norm * point_norm / (n as f64 - 1.0);
        assert!(value >= bound - 1e-9 * bound.abs(), "U = {value} < bound {bound}");
        // The same bound is the order-correlation inequality in disguise.
        let ratio = benedetti(&coeffs, point.lambdas()).unwrap();
        assert!(ratio >= 1.0 / (n as f64 - 1.0) - 1e-12);
    }
}

#[test]
fn range_bound_estimates_converge_across_sizes() {
    // The upper end must find the symmetric witness sqrt(2(n-1)); the lower
    // end converges to the balanced two-cluster minimum
    // sqrt(n(n-1) / (floor(n/2) ceil(n/2))), which dominates sqrt(2).
    for n in 3..=8usize {
        let u = BaseFunction::range(n).unwrap();
        let (k, cap) = estimate_bounds(&u, 4_000, 0x65 + n as u64).unwrap();
        let nf = n as f64;
        let upper = (2.0 * (nf - 1.0)).sqrt();
        let half_down = (n / 2) as f64;
        let half_up = n.div_ceil(2) as f64;
        let two_cluster = (nf * (nf - 1.0) / (half_down * half_up)).sqrt();
        assert!((cap - upper).abs() < 1e-3, "n = {n}: K = {cap}, want {upper}");
        assert!((k - two_cluster).abs() < 1e-3, "n = {n}: k = {k}, want {two_cluster}");
        assert!(k >= 2f64.sqrt());
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let multi = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();

    let spec = DistributionSpec::standard_normal();
    let u = BaseFunction::gini(5).unwrap();

    let test_single =
        single.install(|| independence_test_simulated(&spec, &u, 5, 50, 199, 0.05, 99).unwrap());
    let test_multi =
        multi.install(|| independence_test_simulated(&spec, &u, 5, 50, 199, 0.05, 99).unwrap());
    assert_eq!(test_single.dcov.to_bits(), test_multi.dcov.to_bits());
    assert_eq!(test_single.p_value.to_bits(), test_multi.p_value.to_bits());

    let range4 = BaseFunction::range(4).unwrap();
    let table_single = single.install(|| tstar_table(&range4, 4, 20_000, &[0.1, 0.9], 5).unwrap());
    let table_multi = multi.install(|| tstar_table(&range4, 4, 20_000, &[0.1, 0.9], 5).unwrap());
    for (a, b) in table_single.quantiles.iter().zip(&table_multi.quantiles) {
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    let quad_single =
        single.install(|| integrate_region(4, 128, &|t: &[f64]| 1.0 + t[0]).unwrap());
    let quad_multi = multi.install(|| integrate_region(4, 128, &|t: &[f64]| 1.0 + t[0]).unwrap());
    assert_eq!(quad_single.to_bits(), quad_multi.to_bits());
}
