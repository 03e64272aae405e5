use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of one named check. Witnesses carry the bidegrees inspected, the
/// findings worth reporting, and every failure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: Map<String, Value>,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
}

impl VerificationReport {
    pub fn new(check: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            params: Map::new(),
            verdict: Verdict::Pass,
            witnesses: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Records a failure with its witness.
    pub fn fail(&mut self, witness: impl Into<Value>) {
        self.verdict = Verdict::Fail;
        self.witnesses.push(witness.into());
    }

    /// Records an informational witness without changing the verdict.
    pub fn note(&mut self, witness: impl Into<Value>) {
        self.witnesses.push(witness.into());
    }

    /// Fails with `witness` unless `ok`.
    pub fn require(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        if !ok {
            self.fail(witness());
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}
