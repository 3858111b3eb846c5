//! Reports and their JSON and Markdown renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use kdecomp_core::lambda::LocalizedScalar;
use serde::{Deserialize, Serialize};

use crate::instance::Instance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { pass: true, witness: None }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Verdict { pass: false, witness: Some(witness.into()) }
    }

    pub fn check(ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass()
        } else {
            Self::fail(witness())
        }
    }
}

impl From<&kdecomp_core::gsets::Verdict> for Verdict {
    fn from(v: &kdecomp_core::gsets::Verdict) -> Self {
        Verdict { pass: v.pass, witness: v.witness.clone() }
    }
}

/// An exact rational, as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exact {
    pub num: String,
    pub den: String,
}

impl From<&LocalizedScalar> for Exact {
    fn from(x: &LocalizedScalar) -> Self {
        Exact { num: x.numerator().to_string(), den: x.denominator().to_string() }
    }
}

impl std::fmt::Display for Exact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == "1" {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub instance: Instance,
    /// The coefficient ring, `Z` or `Z[1/N]`.
    pub ring: String,
    pub verdicts: BTreeMap<String, Verdict>,
    pub ranks: BTreeMap<String, u64>,
    pub determinants: BTreeMap<String, Exact>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
    pub engine_version: String,
    pub runtime_ms: u64,
}

impl Report {
    pub fn new(name: impl Into<String>, instance: Instance) -> Self {
        Report {
            name: name.into(),
            instance,
            ring: String::new(),
            verdicts: BTreeMap::new(),
            ranks: BTreeMap::new(),
            determinants: BTreeMap::new(),
            details: BTreeMap::new(),
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
            runtime_ms: 0,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn verdict(&mut self, name: &str, v: Verdict) {
        self.verdicts.insert(name.to_string(), v);
    }

    pub fn rank(&mut self, name: &str, r: impl TryInto<u64>) {
        self.ranks.insert(name.to_string(), r.try_into().unwrap_or(u64::MAX));
    }

    pub fn determinant(&mut self, name: &str, x: &LocalizedScalar) {
        self.determinants.insert(name.to_string(), x.into());
    }

    pub fn detail(&mut self, name: &str, v: serde_json::Value) {
        self.details.insert(name.to_string(), v);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let status = if self.all_pass() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "## {} ({}): {status}", self.name, self.instance.kind);
        let _ = writeln!(out);
        let _ = writeln!(out, "Coefficient ring: {}", self.ring);
        let _ = writeln!(out);
        let _ = writeln!(out, "| check | verdict | witness |");
        let _ = writeln!(out, "|---|---|---|");
        for (k, v) in &self.verdicts {
            let verdict = if v.pass { "pass" } else { "FAIL" };
            let _ = writeln!(out, "| {k} | {verdict} | {} |", v.witness.as_deref().unwrap_or(""));
        }
        if !self.ranks.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "| rank | value |");
            let _ = writeln!(out, "|---|---|");
            for (k, v) in &self.ranks {
                let _ = writeln!(out, "| {k} | {v} |");
            }
        }
        if !self.determinants.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "| determinant | value |");
            let _ = writeln!(out, "|---|---|");
            for (k, v) in &self.determinants {
                let _ = writeln!(out, "| {k} | {v} |");
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "engine {} in {} ms", self.engine_version, self.runtime_ms);
        out
    }
}

/// One entry of a batch: a report, or the input error that prevented one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchEntry {
    pub name: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub entries: Vec<BatchEntry>,
    pub exit_code: i32,
    pub engine_version: String,
}

impl BatchReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Batch: {} instances, exit code {}", self.entries.len(), self.exit_code);
        let _ = writeln!(out);
        let _ = writeln!(out, "| instance | exit |");
        let _ = writeln!(out, "|---|---|");
        for e in &self.entries {
            let _ = writeln!(out, "| {} | {} |", e.name, e.exit_code);
        }
        for e in &self.entries {
            let _ = writeln!(out);
            match (&e.report, &e.error) {
                (Some(r), _) => out.push_str(&r.to_markdown()),
                (None, Some(err)) => {
                    let _ = writeln!(out, "## {}: bad input\n\n{err}", e.name);
                }
                (None, None) => {}
            }
        }
        out
    }
}
