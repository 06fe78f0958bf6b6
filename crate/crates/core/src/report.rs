//! JSON run reports shared by the CLI and the reproduction corpus.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

/// Bumped whenever a field changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A conclusion being checked, stated in the report's own words.
#[derive(Clone, Debug, Serialize)]
pub struct Claim {
    pub statement: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    pub verdict: bool,
    pub claims: Vec<Claim>,
    pub stages: Vec<Stage>,
    pub certificates: BTreeMap<String, Value>,
    /// Only filled when asked for, so that reports stay byte-identical
    /// across runs by default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            inputs: BTreeMap::new(),
            seed,
            verdict: true,
            claims: Vec::new(),
            stages: Vec::new(),
            certificates: BTreeMap::new(),
            timings: None,
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    /// Records a stage; a failed stage fails the report.
    pub fn stage(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.verdict &= passed;
        self.stages.push(Stage { name: name.into(), passed, detail: detail.into() });
        passed
    }

    pub fn claim(&mut self, statement: impl Into<String>, passed: bool) -> bool {
        self.verdict &= passed;
        self.claims.push(Claim { statement: statement.into(), passed });
        passed
    }

    pub fn certificate<T: Serialize>(&mut self, key: &str, value: &T) {
        let v = serde_json::to_value(value).unwrap_or_else(|e| Value::String(format!("unserializable: {e}")));
        self.certificates.insert(key.to_string(), v);
    }

    pub fn time(&mut self, key: &str, start: Instant) {
        self.timings.get_or_insert_with(BTreeMap::new).insert(key.to_string(), start.elapsed().as_secs_f64());
    }

    /// First failing stage or claim, for error messages.
    pub fn first_failure(&self) -> Option<String> {
        self.stages
            .iter()
            .find(|s| !s.passed)
            .map(|s| format!("stage `{}`: {}", s.name, s.detail))
            .or_else(|| self.claims.iter().find(|c| !c.passed).map(|c| format!("claim: {}", c.statement)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_propagate() {
        let mut r = RunReport::new("test", 3);
        assert!(r.stage("a", true, "fine"));
        assert!(r.verdict);
        r.claim("something holds", false);
        assert!(!r.verdict);
        assert_eq!(r.first_failure().unwrap(), "claim: something holds");
        assert!(!r.to_json().contains("timings"));
        r.time("x", Instant::now());
        assert!(r.to_json().contains("timings"));
    }
}
