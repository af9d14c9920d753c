use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// One requested check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub verdict: Verdict,
    /// Human-readable witness and result lines.
    pub lines: Vec<String>,
    /// Structured result.
    pub data: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Invocation {
    pub command: String,
    pub input: String,
    /// Flags that affect results, as `name=value`.
    pub options: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub verdict: Verdict,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub invocation: Invocation,
    pub checks: Vec<CheckEntry>,
    pub summary: Summary,
}

impl Report {
    /// The overall verdict is the worst check verdict (fail over inconclusive over pass).
    pub fn new(invocation: Invocation, checks: Vec<CheckEntry>) -> Self {
        let verdict = checks.iter().map(|c| c.verdict).max().unwrap_or(Verdict::Pass);
        Report {
            invocation,
            checks,
            summary: Summary {
                verdict,
                exit_code: verdict.exit_code(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = write!(out, "{}: {}", c.name, c.verdict.tag());
            if let Some(ms) = c.millis {
                let _ = write!(out, " ({ms} ms)");
            }
            out.push('\n');
            for line in &c.lines {
                let _ = writeln!(out, "  {line}");
            }
        }
        let _ = writeln!(out, "overall: {}", self.summary.verdict.tag());
        out
    }
}
