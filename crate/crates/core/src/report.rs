//! Structured pass/fail records for numerical checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// An input point achieving an extreme of a checked quantity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub point: Vec<f64>,
    pub value: f64,
}

impl Witness {
    pub fn new(label: impl Into<String>, point: &[f64], value: f64) -> Self {
        Witness {
            label: label.into(),
            point: point.to_vec(),
            value,
        }
    }
}

/// Outcome of one numerical check.
///
/// `measured` is oriented so that `passed == (measured <= tolerance)` always
/// holds: equality checks store the worst discrepancy, inequality checks
/// store the worst violation (non-positive when every bound is satisfied).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub witnesses: Vec<Witness>,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

impl VerificationReport {
    pub fn new(check_name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        VerificationReport {
            check_name: check_name.into(),
            passed: measured <= tolerance,
            measured,
            tolerance,
            witnesses: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witnesses.push(witness);
        self
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| crate::Error::Descriptor(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| crate::Error::Descriptor(e.to_string()))
    }
}
