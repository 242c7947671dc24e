//! Run artefacts: `summary.json` plus optional CSV and profile files.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::settings::{Command, Settings};

/// One asserted comparison `measured <relation> limit`.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub relation: &'static str,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &str, measured: f64, limit: f64) -> Self {
        Check { name: name.into(), measured, relation: "<=", limit, passed: measured <= limit }
    }

    pub fn at_least(name: &str, measured: f64, limit: f64) -> Self {
        Check { name: name.into(), measured, relation: ">=", limit, passed: measured >= limit }
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub results: Value,
    pub checks: Vec<Check>,
    /// Extra files as (name, contents).
    pub files: Vec<(String, String)>,
}

impl Report {
    pub fn new(results: Value) -> Self {
        Report { results, ..Default::default() }
    }

    pub fn check(mut self, c: Check) -> Self {
        self.checks.push(c);
        self
    }

    pub fn file(mut self, name: &str, contents: String) -> Self {
        self.files.push((name.into(), contents));
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn summary(command: Command, settings: &Settings, body: Value) -> Value {
    // Unset flags are left out of the record.
    let mut given = serde_json::to_value(settings).unwrap_or_default();
    if let Value::Object(m) = &mut given {
        m.retain(|_, v| !v.is_null());
    }
    let mut s = json!({ "command": command, "settings": given });
    if let (Value::Object(dst), Value::Object(src)) = (&mut s, body) {
        dst.extend(src);
    }
    s
}

pub fn write_report(dir: &Path, command: Command, settings: &Settings, report: &Report) -> Result<()> {
    let failures: Vec<&Check> = report.checks.iter().filter(|c| !c.passed).collect();
    let body = json!({
        "passed": report.passed(),
        "results": report.results,
        "checks": report.checks,
        "failures": failures,
    });
    write_files(dir, &summary(command, settings, body), &report.files)
}

/// Summary for a run that stopped on an error before its checks.
pub fn write_error(dir: &Path, command: Command, settings: &Settings, error: &anyhow::Error) -> Result<()> {
    let body = json!({
        "passed": false,
        "error": format!("{error:#}"),
        "checks": [],
        "failures": [{ "name": "error", "message": format!("{error:#}") }],
    });
    write_files(dir, &summary(command, settings, body), &[])
}

fn write_files(dir: &Path, summary: &Value, files: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    let path = dir.join("summary.json");
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    for (name, contents) in files {
        let path = dir.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
