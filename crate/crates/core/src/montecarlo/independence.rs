//! Permutation test of independence between block means and a scale
//! statistic, driving the normality test.
//!
//! Data is split into disjoint blocks in input order; each block contributes
//! a (mean, Z_n) pair. Both coordinates are standardized across blocks before
//! the distance-covariance statistic, which makes the p-value invariant to
//! location-scale changes of the raw data (exactly so for power-of-two
//! scalings, where the float arithmetic commutes). The permutation scheme
//! shuffles the z-coordinates against the mean-coordinates; the p-value uses
//! the add-one convention and can never be zero.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basefn::BaseFunction;
use crate::error::{Error, Result};
use crate::montecarlo::{dependence_pairs, DistributionSpec};
use crate::rng::{substream, PERMUTATION_STREAM_BASE};
use crate::sample::OrderedSample;

/// Result of one permutation independence test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic_name: String,
    pub n_block: usize,
    pub n_blocks: usize,
    pub dcov: f64,
    pub p_value: f64,
    pub permutations: usize,
    pub reject: bool,
    pub alpha: f64,
    pub seed: u64,
}

impl TestReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Descriptor(e.to_string()))
    }
}

/// Tests raw data for normality: splits it into floor(N / n_block) disjoint
/// blocks in input order and runs the permutation test on (mean, Z_n) pairs.
///
/// Blocks with all values equal carry no scale information and make the
/// test ill-posed, so they surface as a degeneracy error here (simulated
/// continuous data never produces them).
pub fn independence_test(
    data: &[f64],
    u: &BaseFunction,
    n_block: usize,
    permutations: usize,
    alpha: f64,
    seed: u64,
) -> Result<TestReport> {
    if n_block < 3 {
        return Err(Error::SampleTooSmall {
            min: 3,
            got: n_block,
        });
    }
    if data.len() < 2 * n_block {
        return Err(Error::InsufficientData(format!(
            "need at least {} values for blocks of {}, got {}",
            2 * n_block,
            n_block,
            data.len()
        )));
    }
    let n_blocks = data.len() / n_block;
    let mut pairs = Vec::with_capacity(n_blocks);
    for b in 0..n_blocks {
        let block = &data[b * n_block..(b + 1) * n_block];
        let sample = OrderedSample::new(block)?;
        if sample.sample_range() == 0.0 {
            return Err(Error::DegenerateSample);
        }
        pairs.push((sample.mean(), u.statistic(&sample)?));
    }
    permutation_test(&pairs, u.name(), n_block, permutations, alpha, seed)
}

/// Simulates `n_blocks` blocks from `spec` and runs the permutation test.
pub fn independence_test_simulated(
    spec: &DistributionSpec,
    u: &BaseFunction,
    n_block: usize,
    n_blocks: usize,
    permutations: usize,
    alpha: f64,
    seed: u64,
) -> Result<TestReport> {
    let pairs = dependence_pairs(spec, u, n_block, n_blocks, seed)?;
    permutation_test(&pairs, u.name(), n_block, permutations, alpha, seed)
}

fn permutation_test(
    pairs: &[(f64, f64)],
    statistic_name: &str,
    n_block: usize,
    permutations: usize,
    alpha: f64,
    seed: u64,
) -> Result<TestReport> {
    if permutations < 99 {
        return Err(Error::InvalidParameter(
            "at least 99 permutations are required".into(),
        ));
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let m = pairs.len();
    if m < 2 {
        return Err(Error::InsufficientData(
            "at least 2 blocks are required".into(),
        ));
    }

    let xs = standardize(pairs.iter().map(|p| p.0).collect());
    let zs = standardize(pairs.iter().map(|p| p.1).collect());

    // Distance matrices and row sums; every permutation reuses them.
    let mf = m as f64;
    let mut a = vec![0.0; m * m];
    let mut b = vec![0.0; m * m];
    let mut row_a = vec![0.0; m];
    let mut row_b = vec![0.0; m];
    for k in 0..m {
        for l in 0..m {
            let da = (xs[k] - xs[l]).abs();
            let db = (zs[k] - zs[l]).abs();
            a[k * m + l] = da;
            b[k * m + l] = db;
            row_a[k] += da;
            row_b[k] += db;
        }
    }
    let s2 = (row_a.iter().sum::<f64>() / (mf * mf)) * (row_b.iter().sum::<f64>() / (mf * mf));

    let statistic = |perm: &[usize]| -> f64 {
        let mut s1 = 0.0;
        for k in 0..m {
            let pk = perm[k] * m;
            let ak = k * m;
            for l in 0..m {
                s1 += a[ak + l] * b[pk + perm[l]];
            }
        }
        let s3 = (0..m).map(|k| row_a[k] * row_b[perm[k]]).sum::<f64>();
        (s1 / (mf * mf) + s2 - 2.0 * s3 / (mf * mf * mf)).max(0.0)
    };

    let identity: Vec<usize> = (0..m).collect();
    let observed = statistic(&identity);

    let exceed = (0..permutations as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(seed, PERMUTATION_STREAM_BASE + j);
            let mut perm: Vec<usize> = (0..m).collect();
            perm.shuffle(&mut rng);
            usize::from(statistic(&perm) >= observed)
        })
        .sum::<usize>();

    let p_value = (1 + exceed) as f64 / (1 + permutations) as f64;
    Ok(TestReport {
        statistic_name: statistic_name.to_string(),
        n_block,
        n_blocks: m,
        dcov: observed,
        p_value,
        permutations,
        reject: p_value <= alpha,
        alpha,
        seed,
    })
}

/// Center and scale by the sample standard deviation across blocks; a
/// constant coordinate is left centered (the statistic degenerates to zero
/// and the p-value to one on its own).
fn standardize(mut v: Vec<f64>) -> Vec<f64> {
    let m = v.len() as f64;
    let mean = v.iter().sum::<f64>() / m;
    for x in &mut v {
        *x -= mean;
    }
    let sd = (v.iter().map(|x| x * x).sum::<f64>() / (m - 1.0)).sqrt();
    if sd > 0.0 {
        for x in &mut v {
            *x /= sd;
        }
    }
    v
}
