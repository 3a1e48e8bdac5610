//! Machine-readable reports. Field order is fixed and maps are sorted, so the
//! same config and seed give byte-identical JSON. Timings are kept out.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Equal,
}

/// One thresholded quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        // NaN never passes
        let pass = value <= threshold;
        Check { name: name.into(), value, relation: Relation::AtMost, threshold, pass }
    }

    pub fn at_least(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        let pass = value >= threshold;
        Check { name: name.into(), value, relation: Relation::AtLeast, threshold, pass }
    }

    pub fn equal(name: impl Into<String>, value: f64, expected: f64) -> Self {
        Check { name: name.into(), value, relation: Relation::Equal, threshold: expected, pass: value == expected }
    }

    /// A step that could not be computed at all.
    pub fn failed(name: impl Into<String>) -> Self {
        Check { name: name.into(), value: f64::NAN, relation: Relation::Equal, threshold: 0.0, pass: false }
    }
}

/// Checks plus free-form data from one suite.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub data: BTreeMap<String, Value>,
    pub errors: Vec<String>,
}

impl Outcome {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn put(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.to_string(), serde_json::to_value(v).unwrap_or(Value::Null));
    }

    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn merge(&mut self, other: Outcome) {
        self.checks.extend(other.checks);
        self.data.extend(other.data);
        self.errors.extend(other.errors);
    }

    /// Names of failing checks and any errors.
    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).chain(self.errors.iter().cloned()).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub config: BTreeMap<String, Value>,
    pub passed: bool,
    pub failures: Vec<String>,
    pub checks: Vec<Check>,
    pub data: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64, config: BTreeMap<String, Value>, outcome: Outcome) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            seed,
            config,
            passed: outcome.passed(),
            failures: outcome.failures(),
            checks: outcome.checks,
            data: outcome.data,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
