//! Named expected-vs-computed assertions collected into reports.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl ToString, computed: impl ToString) -> Check {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        Check {
            pass: expected == computed,
            name: name.into(),
            expected,
            computed,
        }
    }

    /// A check whose verdict is not plain string equality.
    pub fn with_verdict(name: impl Into<String>, expected: impl ToString, computed: impl ToString, pass: bool) -> Check {
        Check {
            name: name.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            pass,
        }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}
