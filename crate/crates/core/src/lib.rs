//! Scale statistics on ordered samples.
//!
//! This crate implements a toolkit around statistics of the form
//! `Z_n = U(x_(1) - mean, ..., x_(n) - mean)` where U is a nonnegative,
//! definite, positively homogeneous *base function* of the sorted centered
//! sample — the range, Gini's mean difference, and the sample variance are
//! the canonical members. Around that catalog it provides:
//!
//! - order statistics, moments, and studentized profiles ([`sample`]);
//! - the base-function catalog with empirical feasibility checks, shell
//!   sampling, and extremal-bound estimation ([`basefn`]);
//! - the change of variables between an ordered sample and its studentized
//!   coordinates, with closed-form Jacobian and joint density, plus the
//!   singularity-aware region quadrature ([`transform`]);
//! - the inequality suite, the sigma identities, and the numerical
//!   consistency check of the characterizing integro-functional equation,
//!   with a Laplace negative control ([`verify`]);
//! - distribution samplers, distance covariance, the permutation test of
//!   independence between block means and block scale statistics (a
//!   normality test), and Monte Carlo quantile tables for generalized
//!   studentized statistics ([`montecarlo`]).
//!
//! Everything randomized takes an explicit `u64` seed and partitions
//! ChaCha12 substreams by trial index, so a seed reproduces results
//! bit-for-bit under any degree of parallelism.

pub mod basefn;
pub mod error;
pub mod montecarlo;
pub mod numeric;
pub mod report;
pub mod rng;
pub mod sample;
pub mod transform;
pub mod verify;

pub use basefn::{
    check_feasibility, estimate_bounds, sample_simplex, BaseFunction, Descriptor, SimplexPoint,
};
pub use error::{Error, Result};
pub use montecarlo::{
    dependence_pairs, distance_covariance, independence_test, independence_test_simulated,
    tstar_coverage, tstar_table, DistributionSpec, QuantilePoint, TStarTable, TestReport,
};
pub use report::{VerificationReport, Witness};
pub use rng::substream;
pub use sample::{pairwise_square_identity_check, OrderedSample, StudentizedProfile};
pub use transform::quad::{
    integrate_region, integrate_region_refined, normalization_closed_form, normalization_constant,
    QuadratureResult,
};
pub use transform::{
    forward, inverse, jacobian_abs, region_membership, studentized_density, TransformCoords,
};
pub use verify::{
    anosov_equation_check, anosov_negative_control, benedetti, benedetti_lower_bound,
    definite_ratio_bounds_check, range_inequality_check, sigma_conditions_check, ReferenceDensity,
};
