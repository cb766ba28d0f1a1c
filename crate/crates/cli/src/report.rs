use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// Machine-readable result of one subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub checks: Vec<Check>,
}

/// A named pass/fail item. `lhs` and `rhs` are exact integers or fractions
/// rendered as strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
}

impl Check {
    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            pass,
            lhs: None,
            rhs: None,
        }
    }

    pub fn compare(name: impl Into<String>, pass: bool, lhs: impl ToString, rhs: impl ToString) -> Self {
        Check {
            name: name.into(),
            pass,
            lhs: Some(lhs.to_string()),
            rhs: Some(rhs.to_string()),
        }
    }
}

impl RunReport {
    pub fn new(command: &str, inputs: Value) -> Self {
        RunReport {
            schema: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            outputs: Value::Null,
            checks: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are plain JSON")
    }
}
