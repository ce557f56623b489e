//! Shared input builders for the criterion benchmarks.

use ordstat::{substream, DistributionSpec, OrderedSample};

/// A reproducible standard-normal sample of size n.
pub fn normal_sample(n: usize, seed: u64) -> OrderedSample {
    let mut rng = substream(seed, 0);
    let spec = DistributionSpec::standard_normal();
    loop {
        let raw = spec.sample(n, &mut rng).expect("valid spec");
        let s = OrderedSample::new(&raw).expect("finite draws");
        if s.sd() > 0.0 {
            return s;
        }
    }
}

/// Reproducible (mean, scale) pair data of length m.
pub fn pair_data(m: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = substream(seed, 1);
    let spec = DistributionSpec::standard_normal();
    (0..m)
        .map(|_| {
            let s = OrderedSample::new(&spec.sample(5, &mut rng).expect("valid spec"))
                .expect("finite draws");
            (s.mean(), s.sample_range())
        })
        .collect()
}

/// Raw data stream of length len for the test-normality path.
pub fn raw_data(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, 2);
    DistributionSpec::standard_normal()
        .sample(len, &mut rng)
        .expect("valid spec")
}
