//! Machine-readable outcome of every top-level check.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
    Unknown,
}

/// Decision plus the certificate that lets a reader replay it.
///
/// `accept` and `reject` always carry a certificate or witness; `unknown`
/// only comes out of unsupported search paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    #[serde(default)]
    pub certificate: Value,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl Verdict {
    fn new(decision: Decision, certificate: Value) -> Self {
        Verdict {
            decision,
            condition: None,
            certificate,
            diagnostics: Vec::new(),
        }
    }

    pub fn accept(certificate: Value) -> Self {
        Self::new(Decision::Accept, certificate)
    }

    pub fn reject(certificate: Value) -> Self {
        Self::new(Decision::Reject, certificate)
    }

    pub fn unknown(reason: impl Into<String>) -> Self {
        Self::new(Decision::Unknown, Value::Null).with_diagnostic(reason)
    }

    pub fn with_condition(mut self, condition: impl Into<String>) -> Self {
        self.condition = Some(condition.into());
        self
    }

    pub fn with_diagnostic(mut self, msg: impl Into<String>) -> Self {
        self.diagnostics.push(msg.into());
        self
    }

    pub fn is_accept(&self) -> bool {
        self.decision == Decision::Accept
    }

    pub fn is_reject(&self) -> bool {
        self.decision == Decision::Reject
    }

    /// 0 accept, 1 reject, 3 unknown (2 is reserved for I/O and parse errors).
    pub fn exit_code(&self) -> i32 {
        match self.decision {
            Decision::Accept => 0,
            Decision::Reject => 1,
            Decision::Unknown => 3,
        }
    }

    /// Pretty JSON with lexicographically sorted keys.
    pub fn to_canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("verdict serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}
