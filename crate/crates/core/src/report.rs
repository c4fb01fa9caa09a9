//! Verification reports: one record per check plus an overall verdict.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub check: String,
    pub status: Status,
    /// The identity or comparison being checked, as a formula.
    pub relation: String,
    /// Nonzero leftovers in canonical text form.
    pub residuals: Vec<String>,
    pub artifacts: BTreeMap<String, Value>,
}

impl Check {
    pub fn new(check: &str, status: Status, relation: impl Into<String>) -> Self {
        Check {
            check: check.to_string(),
            status,
            relation: relation.into(),
            residuals: Vec::new(),
            artifacts: BTreeMap::new(),
        }
    }

    pub fn pass_if(check: &str, ok: bool, relation: impl Into<String>) -> Self {
        Self::new(check, Status::from_bool(ok), relation)
    }

    pub fn info(check: &str, relation: impl Into<String>) -> Self {
        Self::new(check, Status::Info, relation)
    }

    pub fn residual(mut self, r: impl ToString) -> Self {
        self.residuals.push(r.to_string());
        self
    }

    pub fn residuals<I: IntoIterator<Item = S>, S: ToString>(mut self, rs: I) -> Self {
        self.residuals.extend(rs.into_iter().map(|r| r.to_string()));
        self
    }

    pub fn artifact(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).expect("artifacts serialize");
        self.artifacts.insert(key.to_string(), v);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub substitutions: Vec<String>,
    pub verdict: Status,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, input: &str, substitutions: Vec<String>) -> Self {
        Report {
            command: command.to_string(),
            input: input.to_string(),
            substitutions,
            verdict: Status::Pass,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        if c.status == Status::Fail {
            self.verdict = Status::Fail;
        }
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == name)
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{} on {}", self.command, self.input);
        if !self.substitutions.is_empty() {
            let _ = write!(out, " with {}", self.substitutions.join(", "));
        }
        out.push('\n');
        for c in &self.checks {
            let _ = writeln!(out, "{}  {:<28} {}", c.status.tag(), c.check, c.relation);
            for r in c.residuals.iter().take(8) {
                let _ = writeln!(out, "      residual: {r}");
            }
            if c.residuals.len() > 8 {
                let _ = writeln!(out, "      ... {} more", c.residuals.len() - 8);
            }
            for (k, v) in &c.artifacts {
                match v {
                    Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
                        let _ = writeln!(out, "      {k}:");
                        for x in items {
                            let _ = writeln!(out, "        {}", plain(x));
                        }
                    }
                    Value::Object(_) | Value::Array(_) => {
                        let _ = writeln!(out, "      {k}: {v}");
                    }
                    other => {
                        let _ = writeln!(out, "      {k}: {}", plain(other));
                    }
                }
            }
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.tag());
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
