//! The catalog of base functions on the ordered zero-sum domain.
//!
//! A base function U maps sorted zero-sum vectors to reals and is meant to be
//! nonnegative, zero only at the origin, and positively homogeneous of some
//! degree p > 0. Applied to the centered order statistics of a sample it
//! yields a scale statistic: the range, Gini's mean difference, and the
//! sample variance are all instances.
//!
//! Constructors enforce structural requirements (dimensions, finiteness,
//! positive exponents, nonnegative coefficients where the family formula
//! needs them, positive definiteness for quadratic forms). The sufficient
//! conditions that merely guarantee definiteness (first/last coefficient
//! strictly positive, linear coefficients not all equal) are *not* enforced
//! here; [`checks::check_feasibility`] probes them empirically and reports
//! warnings, since a configuration can violate them and still be definite.

mod checks;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use checks::{check_feasibility, estimate_bounds, sample_simplex, SimplexPoint};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::sample::OrderedSample;

/// Relative tolerance for the zero-sum membership test in [`BaseFunction::evaluate`].
const ZERO_SUM_REL: f64 = 1e-9;

type CustomEval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Form {
    /// sum_i a_i * x_i with nondecreasing coefficients; degree 1.
    Linear { coeffs: Vec<f64> },
    /// sum_i a_i |x_i|^p; degree p.
    PowerSum { coeffs: Vec<f64>, p: f64 },
    /// sum_ij a_ij |x_i - x_j|^p (row-major matrix); degree p.
    PairwisePower { coeffs: Vec<f64>, p: f64 },
    /// x' A x with positive definite symmetric part; degree 2.
    Quadratic { coeffs: Vec<f64> },
    /// sum_ij a_ij |x_i|^p |x_j|^q; degree p + q.
    MixedPower { coeffs: Vec<f64>, p: f64, q: f64 },
    /// User-supplied evaluation with a declared degree.
    Custom { eval: CustomEval },
}

impl Form {
    fn family_name(&self) -> &'static str {
        match self {
            Form::Linear { .. } => "linear",
            Form::PowerSum { .. } => "power_sum",
            Form::PairwisePower { .. } => "pairwise_power",
            Form::Quadratic { .. } => "quadratic_form",
            Form::MixedPower { .. } => "mixed_power",
            Form::Custom { .. } => "custom",
        }
    }
}

/// A base function: family, coefficients, and declared homogeneity degree.
#[derive(Clone)]
pub struct BaseFunction {
    name: String,
    n: usize,
    degree: f64,
    form: Form,
}

impl fmt::Debug for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseFunction")
            .field("name", &self.name)
            .field("family", &self.form.family_name())
            .field("n", &self.n)
            .field("degree", &self.degree)
            .finish()
    }
}

fn check_finite(coeffs: &[f64]) -> Result<()> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn check_arity(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "base function arity must be at least 2, got {n}"
        )));
    }
    Ok(())
}

fn check_exponent(label: &str, p: f64) -> Result<()> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "exponent {label} must be finite and positive, got {p}"
        )));
    }
    Ok(())
}

fn check_nonnegative(coeffs: &[f64]) -> Result<()> {
    if coeffs.iter().any(|&c| c < 0.0) {
        return Err(Error::InvalidParameter(
            "coefficients must be nonnegative".into(),
        ));
    }
    Ok(())
}

/// Pivoted symmetric decomposition on the symmetric part of `a` (row-major
/// n x n). Succeeds iff every pivot is strictly positive.
fn positive_definite(a: &[f64], n: usize) -> bool {
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            s[i * n + j] = 0.5 * (a[i * n + j] + a[j * n + i]);
        }
    }
    let mut active: Vec<usize> = (0..n).collect();
    for _ in 0..n {
        // Largest remaining diagonal entry as the pivot.
        let (pos, &piv_idx) = match active
            .iter()
            .enumerate()
            .max_by(|x, y| s[x.1 * n + x.1].total_cmp(&s[y.1 * n + y.1]))
        {
            Some(p) => p,
            None => break,
        };
        let pivot = s[piv_idx * n + piv_idx];
        if pivot.is_nan() || pivot <= 0.0 {
            return false;
        }
        active.swap_remove(pos);
        for &r in &active {
            let factor = s[r * n + piv_idx] / pivot;
            for &c in &active {
                s[r * n + c] -= factor * s[piv_idx * n + c];
            }
            s[r * n + piv_idx] = 0.0;
            s[piv_idx * n + r] = 0.0;
        }
    }
    true
}

impl BaseFunction {
    /// Linear form sum_i a_i x_i. `coeffs` must be nondecreasing; degree 1.
    pub fn linear(coeffs: Vec<f64>) -> Result<Self> {
        check_arity(coeffs.len())?;
        check_finite(&coeffs)?;
        if coeffs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(
                "linear coefficients must be nondecreasing".into(),
            ));
        }
        Ok(BaseFunction {
            name: "linear".into(),
            n: coeffs.len(),
            degree: 1.0,
            form: Form::Linear { coeffs },
        })
    }

    /// Power sum sum_i a_i |x_i|^p with nonnegative coefficients; degree p.
    pub fn power_sum(coeffs: Vec<f64>, p: f64) -> Result<Self> {
        check_arity(coeffs.len())?;
        check_finite(&coeffs)?;
        check_exponent("p", p)?;
        check_nonnegative(&coeffs)?;
        Ok(BaseFunction {
            name: "power_sum".into(),
            n: coeffs.len(),
            degree: p,
            form: Form::PowerSum { coeffs, p },
        })
    }

    /// Pairwise power sum_ij a_ij |x_i - x_j|^p. `coeffs` is row-major n x n
    /// with nonnegative entries; degree p.
    pub fn pairwise_power(coeffs: Vec<f64>, n: usize, p: f64) -> Result<Self> {
        check_arity(n)?;
        if coeffs.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "pairwise coefficient matrix must hold {} entries, got {}",
                n * n,
                coeffs.len()
            )));
        }
        check_finite(&coeffs)?;
        check_exponent("p", p)?;
        check_nonnegative(&coeffs)?;
        Ok(BaseFunction {
            name: "pairwise_power".into(),
            n,
            degree: p,
            form: Form::PairwisePower { coeffs, p },
        })
    }

    /// Quadratic form x' A x. The symmetric part of the row-major matrix must
    /// be positive definite (checked by a pivoted decomposition); degree 2.
    pub fn quadratic_form(coeffs: Vec<f64>, n: usize) -> Result<Self> {
        check_arity(n)?;
        if coeffs.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "quadratic coefficient matrix must hold {} entries, got {}",
                n * n,
                coeffs.len()
            )));
        }
        check_finite(&coeffs)?;
        if !positive_definite(&coeffs, n) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(BaseFunction {
            name: "quadratic_form".into(),
            n,
            degree: 2.0,
            form: Form::Quadratic { coeffs },
        })
    }

    /// Mixed power sum_ij a_ij |x_i|^p |x_j|^q with nonnegative row-major
    /// coefficients; degree p + q.
    pub fn mixed_power(coeffs: Vec<f64>, n: usize, p: f64, q: f64) -> Result<Self> {
        check_arity(n)?;
        if coeffs.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "mixed coefficient matrix must hold {} entries, got {}",
                n * n,
                coeffs.len()
            )));
        }
        check_finite(&coeffs)?;
        check_exponent("p", p)?;
        check_exponent("q", q)?;
        check_nonnegative(&coeffs)?;
        Ok(BaseFunction {
            name: "mixed_power".into(),
            n,
            degree: p + q,
            form: Form::MixedPower { coeffs, p, q },
        })
    }

    /// A user-supplied evaluation with declared degree. Run
    /// [`check_feasibility`] before trusting it in tests or tables.
    pub fn custom<F>(name: impl Into<String>, n: usize, degree: f64, eval: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        check_arity(n)?;
        check_exponent("degree", degree)?;
        Ok(BaseFunction {
            name: name.into(),
            n,
            degree,
            form: Form::Custom {
                eval: Arc::new(eval),
            },
        })
    }

    // ------------------------------------------------------------------
    // Named presets
    // ------------------------------------------------------------------

    /// The sample range: linear with coefficients (-1, 0, ..., 0, 1).
    pub fn range(n: usize) -> Result<Self> {
        check_arity(n)?;
        let mut coeffs = vec![0.0; n];
        coeffs[0] = -1.0;
        coeffs[n - 1] = 1.0;
        Ok(Self::linear(coeffs)?.with_name("range"))
    }

    /// Gini's mean difference: pairwise power, p = 1, a_ij = 1/(n(n-1)).
    pub fn gini(n: usize) -> Result<Self> {
        check_arity(n)?;
        let c = 1.0 / (n as f64 * (n as f64 - 1.0));
        Ok(Self::pairwise_power(vec![c; n * n], n, 1.0)?.with_name("gini"))
    }

    /// The sample variance: power sum, p = 2, a_i = 1/(n-1).
    pub fn variance(n: usize) -> Result<Self> {
        check_arity(n)?;
        let c = 1.0 / (n as f64 - 1.0);
        Ok(Self::power_sum(vec![c; n], 2.0)?.with_name("variance"))
    }

    /// The sample standard deviation sqrt(sum x_i^2 / (n-1)); degree 1.
    /// Identically 1 on the studentized shell.
    pub fn sample_sd(n: usize) -> Result<Self> {
        check_arity(n)?;
        let denom = n as f64 - 1.0;
        Self::custom("sd", n, 1.0, move |x| {
            (x.iter().map(|v| v * v).sum::<f64>() / denom).sqrt()
        })
    }

    /// sd / sqrt(n); degree 1. Studentizing with it reproduces the classical
    /// t statistic.
    pub fn sd_over_sqrt_n(n: usize) -> Result<Self> {
        check_arity(n)?;
        let denom = n as f64 - 1.0;
        let root_n = (n as f64).sqrt();
        Self::custom("sd_over_sqrt_n", n, 1.0, move |x| {
            (x.iter().map(|v| v * v).sum::<f64>() / denom).sqrt() / root_n
        })
    }

    /// Look up a named preset: `range`, `gini`, or `variance`.
    pub fn preset(name: &str, n: usize) -> Result<Self> {
        match name {
            "range" => Self::range(n),
            "gini" => Self::gini(n),
            "variance" => Self::variance(n),
            other => Err(Error::InvalidParameter(format!(
                "unknown preset '{other}' (expected range | gini | variance)"
            ))),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &'static str {
        self.form.family_name()
    }

    /// Number of arguments the function takes.
    pub fn arity(&self) -> usize {
        self.n
    }

    /// Declared homogeneity degree p.
    pub fn degree(&self) -> f64 {
        self.degree
    }

    // ------------------------------------------------------------------
    // Evaluation
    // ------------------------------------------------------------------

    /// Evaluates U at a point of the ordered zero-sum domain.
    ///
    /// The point must be ascending and zero-sum (relative tolerance 1e-9);
    /// anything else is a domain error.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: point.len(),
            });
        }
        if point.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if point.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::DomainViolation("point is not sorted ascending".into()));
        }
        let sum = compensated_sum(point);
        let scale: f64 = point.iter().map(|x| x.abs()).sum::<f64>();
        if sum.abs() > ZERO_SUM_REL * scale.max(1.0) {
            return Err(Error::DomainViolation(format!(
                "point does not sum to zero (sum = {sum})"
            )));
        }
        Ok(self.eval_raw(point))
    }

    /// Evaluation without domain validation; callers guarantee membership.
    pub(crate) fn eval_raw(&self, point: &[f64]) -> f64 {
        match &self.form {
            Form::Linear { coeffs } => {
                let terms: Vec<f64> = coeffs.iter().zip(point).map(|(a, x)| a * x).collect();
                compensated_sum(&terms)
            }
            Form::PowerSum { coeffs, p } => coeffs
                .iter()
                .zip(point)
                .map(|(a, x)| a * abs_pow(*x, *p))
                .sum(),
            Form::PairwisePower { coeffs, p } => {
                let n = self.n;
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        let a = coeffs[i * n + j];
                        if a != 0.0 {
                            acc += a * abs_pow(point[i] - point[j], *p);
                        }
                    }
                }
                acc
            }
            Form::Quadratic { coeffs } => {
                let n = self.n;
                let mut acc = 0.0;
                for i in 0..n {
                    let mut row = 0.0;
                    for j in 0..n {
                        row += coeffs[i * n + j] * point[j];
                    }
                    acc += point[i] * row;
                }
                acc
            }
            Form::MixedPower { coeffs, p, q } => {
                let n = self.n;
                let xp: Vec<f64> = point.iter().map(|x| abs_pow(*x, *p)).collect();
                let xq: Vec<f64> = point.iter().map(|x| abs_pow(*x, *q)).collect();
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        acc += coeffs[i * n + j] * xp[i] * xq[j];
                    }
                }
                acc
            }
            Form::Custom { eval } => eval(point),
        }
    }

    /// The statistic Z_n = U(x_(1) - mean, ..., x_(n) - mean).
    ///
    /// By homogeneity this equals sd^degree times U at the studentized
    /// profile whenever sd > 0.
    pub fn statistic(&self, sample: &OrderedSample) -> Result<f64> {
        if sample.n() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: sample.n(),
            });
        }
        self.evaluate(&sample.centered())
    }

    /// The degree-1 normalization U^(1/p). Returns a clone when the degree is
    /// already 1, otherwise a custom wrapper evaluating `evaluate(..)^(1/p)`.
    pub fn unit_degree(&self) -> Self {
        if (self.degree - 1.0).abs() < 1e-12 {
            return self.clone();
        }
        let inner = self.clone();
        let inv_p = 1.0 / self.degree;
        BaseFunction {
            name: format!("{}^(1/{})", self.name, self.degree),
            n: self.n,
            degree: 1.0,
            form: Form::Custom {
                eval: Arc::new(move |x| inner.eval_raw(x).max(0.0).powf(inv_p)),
            },
        }
    }

    /// The coefficient matrix and exponent of a pairwise-power function,
    /// or `None` for other families.
    pub(crate) fn pairwise_coeffs(&self) -> Option<(&[f64], f64)> {
        match &self.form {
            Form::PairwisePower { coeffs, p } => Some((coeffs, *p)),
            _ => None,
        }
    }

    /// Conditions that are sufficient for definiteness in the catalog but are
    /// not enforced at construction. Violations are reported as warnings by
    /// [`check_feasibility`].
    pub(crate) fn condition_warnings(&self) -> Vec<String> {
        let n = self.n;
        let mut warnings = Vec::new();
        match &self.form {
            Form::Linear { coeffs } => {
                if coeffs.iter().all(|&c| c == coeffs[0]) {
                    warnings.push("linear coefficients are all equal; U vanishes on the whole zero-sum domain".into());
                }
            }
            Form::PowerSum { coeffs, .. } => {
                if coeffs[0] <= 0.0 {
                    warnings.push("first power-sum coefficient is not strictly positive".into());
                }
                if coeffs[n - 1] <= 0.0 {
                    warnings.push("last power-sum coefficient is not strictly positive".into());
                }
            }
            Form::PairwisePower { coeffs, .. } => {
                if coeffs[n - 1] + coeffs[(n - 1) * n] <= 0.0 {
                    warnings.push(
                        "extreme-pair pairwise coefficients a_1n + a_n1 are not strictly positive"
                            .into(),
                    );
                }
            }
            Form::MixedPower { coeffs, .. } => {
                if coeffs[0] <= 0.0 {
                    warnings.push("mixed-power coefficient a_11 is not strictly positive".into());
                }
                if coeffs[n * n - 1] <= 0.0 {
                    warnings.push("mixed-power coefficient a_nn is not strictly positive".into());
                }
            }
            Form::Quadratic { .. } | Form::Custom { .. } => {}
        }
        warnings
    }

    // ------------------------------------------------------------------
    // JSON descriptor
    // ------------------------------------------------------------------

    /// The serializable descriptor. Custom functions carry an opaque callback
    /// and cannot be serialized.
    pub fn descriptor(&self) -> Result<Descriptor> {
        let coefficients = match &self.form {
            Form::Linear { coeffs } | Form::PowerSum { coeffs, .. } => coeffs.clone(),
            Form::PairwisePower { coeffs, .. } | Form::Quadratic { coeffs } => coeffs.clone(),
            Form::MixedPower { coeffs, p, q } => {
                // degree = p + q cannot recover the split, so p and q lead
                // the coefficient array.
                let mut packed = Vec::with_capacity(2 + coeffs.len());
                packed.push(*p);
                packed.push(*q);
                packed.extend_from_slice(coeffs);
                packed
            }
            Form::Custom { .. } => {
                return Err(Error::Descriptor(
                    "custom base functions have no serializable descriptor".into(),
                ))
            }
        };
        Ok(Descriptor {
            family: self.form.family_name().to_string(),
            n: self.n,
            degree: self.degree,
            coefficients,
        })
    }

    pub fn from_descriptor(d: &Descriptor) -> Result<Self> {
        let f = match d.family.as_str() {
            "linear" => {
                let f = Self::linear(d.coefficients.clone())?;
                if (d.degree - 1.0).abs() > 0.0 {
                    return Err(Error::Descriptor("linear descriptors must declare degree 1".into()));
                }
                f
            }
            "power_sum" => Self::power_sum(d.coefficients.clone(), d.degree)?,
            "pairwise_power" => Self::pairwise_power(d.coefficients.clone(), d.n, d.degree)?,
            "quadratic_form" => {
                if (d.degree - 2.0).abs() > 0.0 {
                    return Err(Error::Descriptor(
                        "quadratic-form descriptors must declare degree 2".into(),
                    ));
                }
                Self::quadratic_form(d.coefficients.clone(), d.n)?
            }
            "mixed_power" => {
                if d.coefficients.len() != 2 + d.n * d.n {
                    return Err(Error::Descriptor(
                        "mixed-power descriptors pack [p, q, matrix...] into coefficients".into(),
                    ));
                }
                let p = d.coefficients[0];
                let q = d.coefficients[1];
                if (p + q - d.degree).abs() > 1e-12 * d.degree.abs().max(1.0) {
                    return Err(Error::Descriptor(
                        "mixed-power degree must equal p + q".into(),
                    ));
                }
                Self::mixed_power(d.coefficients[2..].to_vec(), d.n, p, q)?
            }
            other => {
                return Err(Error::Descriptor(format!("unknown family '{other}'")));
            }
        };
        if f.arity() != d.n {
            return Err(Error::Descriptor(format!(
                "descriptor n = {} does not match {} coefficients",
                d.n,
                f.arity()
            )));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(&self.descriptor()?).map_err(|e| Error::Descriptor(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: Descriptor =
            serde_json::from_str(s).map_err(|e| Error::Descriptor(e.to_string()))?;
        Self::from_descriptor(&d)
    }
}

/// |x|^p with fast paths for the common exponents.
fn abs_pow(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}

/// JSON-serializable description of a base function.
///
/// Floats round-trip bit-exactly through the shortest-decimal encoding used
/// by the JSON layer. Mixed-power descriptors pack `[p, q, matrix...]` into
/// `coefficients` because `degree = p + q` alone cannot recover the split.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Descriptor {
    pub family: String,
    pub n: usize,
    pub degree: f64,
    pub coefficients: Vec<f64>,
}
