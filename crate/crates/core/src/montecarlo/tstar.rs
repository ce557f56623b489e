//! Monte Carlo quantile tables for generalized studentized statistics
//! T* = (mean - mu) / Z_n under a standard normal parent.
//!
//! T* is symmetric about zero (negating a normal sample negates the mean and
//! preserves any scale statistic), so the published quantiles are the
//! symmetrized averages (q_p - q_{1-p}) / 2, which halves the Monte Carlo
//! variance; the raw quantiles stay available in the metadata.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basefn::BaseFunction;
use crate::error::{Error, Result};
use crate::numeric::quantile_sorted;
use crate::rng::{standard_normal, substream};
use crate::sample::OrderedSample;

/// One (level, value) entry of a quantile table.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuantilePoint {
    pub level: f64,
    pub value: f64,
}

/// Empirical quantiles of T* for one statistic and sample size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TStarTable {
    pub statistic_name: String,
    pub n: usize,
    pub reps: usize,
    pub quantiles: Vec<QuantilePoint>,
    pub seed: u64,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl TStarTable {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Descriptor(e.to_string()))
    }

    /// The table value at `level`, if present.
    pub fn quantile(&self, level: f64) -> Option<f64> {
        self.quantiles
            .iter()
            .find(|q| (q.level - level).abs() < 1e-12)
            .map(|q| q.value)
    }
}

/// Simulates `reps` standard-normal samples of size n and tabulates the
/// requested quantiles of T* = mean / Z_n (mu = 0).
///
/// Requires a feasible degree-1 statistic, reps >= 10_000, and levels inside
/// (0, 1). Replication i draws from substream i of `seed`.
pub fn tstar_table(
    u: &BaseFunction,
    n: usize,
    reps: usize,
    levels: &[f64],
    seed: u64,
) -> Result<TStarTable> {
    if (u.degree() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "T* requires a degree-1 statistic, got degree {}",
            u.degree()
        )));
    }
    if u.arity() != n {
        return Err(Error::ArityMismatch {
            expected: u.arity(),
            got: n,
        });
    }
    if n < 3 {
        return Err(Error::SampleTooSmall { min: 3, got: n });
    }
    if reps < 10_000 {
        return Err(Error::InvalidParameter(format!(
            "at least 10_000 replications are required, got {reps}"
        )));
    }
    if levels.is_empty() || levels.iter().any(|p| *p <= 0.0 || *p >= 1.0) {
        return Err(Error::InvalidParameter(
            "quantile levels must lie strictly inside (0, 1)".into(),
        ));
    }

    let mut draws: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            loop {
                let raw: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
                let sample = OrderedSample::new(&raw).expect("finite draws");
                let z = u.eval_raw(&sample.centered());
                if z > 0.0 {
                    return sample.mean() / z;
                }
            }
        })
        .collect();
    draws.sort_unstable_by(f64::total_cmp);

    let mut sorted_levels: Vec<f64> = levels.to_vec();
    sorted_levels.sort_unstable_by(f64::total_cmp);
    sorted_levels.dedup();

    let raw: Vec<QuantilePoint> = sorted_levels
        .iter()
        .map(|&p| QuantilePoint {
            level: p,
            value: quantile_sorted(&draws, p),
        })
        .collect();
    let symmetric: Vec<QuantilePoint> = sorted_levels
        .iter()
        .map(|&p| QuantilePoint {
            level: p,
            value: 0.5 * (quantile_sorted(&draws, p) - quantile_sorted(&draws, 1.0 - p)),
        })
        .collect();

    let mut metadata = BTreeMap::new();
    metadata.insert(
        "raw_quantiles".to_string(),
        serde_json::to_value(&raw).map_err(|e| Error::Descriptor(e.to_string()))?,
    );
    metadata.insert("symmetrized".to_string(), serde_json::Value::Bool(true));

    Ok(TStarTable {
        statistic_name: u.name().to_string(),
        n,
        reps,
        quantiles: symmetric,
        seed,
        metadata,
    })
}

/// Fraction of `trials` fresh Normal(mean, sd) samples whose interval
/// mean_hat +- q * Z_n covers the true mean. With a pivotal (degree-1) Z_n
/// the coverage does not depend on mean or sd.
pub fn tstar_coverage(
    u: &BaseFunction,
    n: usize,
    q: f64,
    trials: usize,
    mean: f64,
    sd: f64,
    seed: u64,
) -> Result<f64> {
    if u.arity() != n {
        return Err(Error::ArityMismatch {
            expected: u.arity(),
            got: n,
        });
    }
    if trials == 0 || q.is_nan() || q <= 0.0 || sd.is_nan() || sd <= 0.0 {
        return Err(Error::InvalidParameter(
            "coverage needs positive trials, quantile, and sd".into(),
        ));
    }
    let covered: usize = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            loop {
                let raw: Vec<f64> = (0..n).map(|_| mean + sd * standard_normal(&mut rng)).collect();
                let sample = OrderedSample::new(&raw).expect("finite draws");
                let z = u.eval_raw(&sample.centered());
                if z > 0.0 {
                    return usize::from((sample.mean() - mean).abs() <= q * z);
                }
            }
        })
        .sum();
    Ok(covered as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrized_median_is_zero_and_raw_median_is_close() {
        let u = BaseFunction::range(5).unwrap();
        let table = tstar_table(&u, 5, 200_000, &[0.5], 31).unwrap();
        assert_eq!(table.quantile(0.5).unwrap(), 0.0);
        let raw = table.metadata["raw_quantiles"][0]["value"].as_f64().unwrap();
        assert!(raw.abs() < 4e-3, "raw median {raw}");
    }

    #[test]
    fn quantiles_are_monotone_in_level() {
        let u = BaseFunction::gini(5).unwrap();
        let table = tstar_table(&u, 5, 50_000, &[0.025, 0.25, 0.5, 0.75, 0.975], 32).unwrap();
        for w in table.quantiles.windows(2) {
            assert!(w[0].value <= w[1].value);
        }
    }

    #[test]
    fn parameter_errors() {
        let u = BaseFunction::gini(5).unwrap();
        assert!(tstar_table(&u, 5, 5_000, &[0.5], 1).is_err());
        assert!(tstar_table(&u, 5, 20_000, &[0.0], 1).is_err());
        assert!(tstar_table(&u, 5, 20_000, &[1.0], 1).is_err());
        assert!(tstar_table(&u, 4, 20_000, &[0.5], 1).is_err());
        let v = BaseFunction::variance(5).unwrap();
        assert!(tstar_table(&v, 5, 20_000, &[0.5], 1).is_err());
    }

    #[test]
    fn tables_are_seed_deterministic() {
        let u = BaseFunction::range(4).unwrap();
        let a = tstar_table(&u, 4, 20_000, &[0.1, 0.9], 8).unwrap();
        let b = tstar_table(&u, 4, 20_000, &[0.1, 0.9], 8).unwrap();
        for (x, y) in a.quantiles.iter().zip(&b.quantiles) {
            assert_eq!(x.value.to_bits(), y.value.to_bits());
        }
    }
}
