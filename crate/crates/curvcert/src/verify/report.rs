//! Verification reports: reproducible pass/fail certificates with
//! recorded witnesses.
//!
//! Reports are fully determined by `(metric, seed, tolerances, budgets)`.
//! The canonical JSON form orders keys alphabetically and leaves
//! `elapsed_ms` at zero unless a caller explicitly stamps wall-clock time
//! onto it, so re-running a report yields identical bytes.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::metric::MetricSpec;

/// Outcome of a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    /// The expected property held on every sample.
    #[serde(rename = "pass")]
    Pass,
    /// The expected property failed - a discrepancy worth investigating.
    #[serde(rename = "fail")]
    Fail,
    /// A negative claim was confirmed by explicit counterexample.
    #[serde(rename = "refuted-as-expected")]
    RefutedAsExpected,
}

/// A concrete re-checkable sample: a point plus the vector or plane it was
/// evaluated with and the measured quantities.
#[derive(Debug, Clone, Serialize, Default)]
pub struct Witness {
    pub point: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane: Option<[Vec<f64>; 2]>,
    pub measured: BTreeMap<String, Value>,
}

impl Witness {
    pub fn at(point: &[f64]) -> Self {
        Witness {
            point: point.to_vec(),
            ..Default::default()
        }
    }

    pub fn with_vector(mut self, v: &[f64]) -> Self {
        self.vector = Some(v.to_vec());
        self
    }

    pub fn with_plane(mut self, u: &[f64], v: &[f64]) -> Self {
        self.plane = Some([u.to_vec(), v.to_vec()]);
        self
    }

    pub fn measure(mut self, key: &str, value: Value) -> Self {
        self.measured.insert(key.to_string(), value);
        self
    }

    pub fn measure_f64(self, key: &str, value: f64) -> Self {
        self.measure(key, Value::from(value))
    }
}

/// Certificate for one property check.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub property: String,
    pub status: Status,
    pub spec_digest: String,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub samples: BTreeMap<String, u64>,
    pub witnesses: Vec<Witness>,
    pub elapsed_ms: u64,
    pub detail: String,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Canonical JSON: alphabetically ordered keys, deterministic floats.
    pub fn to_canonical_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)
            .map_err(|e| Error::Internal(format!("report serialization: {e}")))?;
        Ok(value.to_string())
    }

    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::RefutedAsExpected => "refuted-as-expected",
        };
        format!("{:<24} {:<20} {}", self.property, status, self.detail)
    }
}

/// SHA-256 of the canonical metric JSON; ties reports to their input.
pub fn spec_digest(spec: &MetricSpec) -> Result<String> {
    let value = serde_json::to_value(spec)
        .map_err(|e| Error::Internal(format!("spec serialization: {e}")))?;
    let canonical = value.to_string();
    Ok(hex::encode(Sha256::digest(canonical.as_bytes())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyMap;

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let spec = MetricSpec::psi(
            2,
            [((0, 0), PolyMap::from_terms(2, [(vec![0, 2], 1.0)]).unwrap())],
        )
        .unwrap();
        let d1 = spec_digest(&spec).unwrap();
        let d2 = spec_digest(&spec).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(d1.len(), 64);

        let other = MetricSpec::psi(
            2,
            [((0, 0), PolyMap::from_terms(2, [(vec![0, 2], 2.0)]).unwrap())],
        )
        .unwrap();
        assert_ne!(d1, spec_digest(&other).unwrap());
    }

    #[test]
    fn canonical_json_sorts_keys() {
        let report = VerificationReport {
            property: "demo".into(),
            status: Status::Pass,
            spec_digest: "abc".into(),
            seed: 7,
            tolerances: BTreeMap::from([("zero_tol".into(), 1e-10)]),
            samples: BTreeMap::from([("points".into(), 3u64)]),
            witnesses: vec![Witness::at(&[0.0]).measure_f64("norm", 1.5)],
            elapsed_ms: 0,
            detail: "d".into(),
        };
        let json = report.to_canonical_json().unwrap();
        let detail_pos = json.find("\"detail\"").unwrap();
        let prop_pos = json.find("\"property\"").unwrap();
        let status_pos = json.find("\"status\"").unwrap();
        assert!(detail_pos < prop_pos && prop_pos < status_pos);
        // deterministic re-serialization
        assert_eq!(json, report.to_canonical_json().unwrap());
    }
}
