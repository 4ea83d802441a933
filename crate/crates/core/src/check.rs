use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub claim: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
    /// Wall-clock time, excluded from pass/fail.
    pub seconds: f64,
}

impl Check {
    pub fn timed(
        name: &str,
        claim: &str,
        run: impl FnOnce() -> (Value, Value, bool),
    ) -> Check {
        let start = Instant::now();
        let (expected, actual, pass) = run();
        Check {
            name: name.to_owned(),
            claim: claim.to_owned(),
            expected,
            actual,
            pass,
            skipped: false,
            seconds: start.elapsed().as_secs_f64(),
        }
    }

    /// A check left out because the instance is beyond its practical cap.
    pub fn skipped(name: &str, claim: &str, reason: &str) -> Check {
        Check {
            name: name.to_owned(),
            claim: claim.to_owned(),
            expected: Value::Null,
            actual: Value::String(reason.to_owned()),
            pass: true,
            skipped: true,
            seconds: 0.0,
        }
    }
}
