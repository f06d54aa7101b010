//! Plain-text nested key-value reports.
//!
//! Two-space indentation per level, `key: value` lines, and `check <name>:
//! pass|FAIL` lines for assertions. Numbers are exact rationals.

use std::fmt::Write as _;

use crate::instance::Instance;
use crate::scalar::{format_scalar, Scalar};
use crate::solution::SolutionVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub scope: String,
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Default)]
pub struct ReportWriter {
    out: String,
    depth: usize,
    scopes: Vec<String>,
    checks: Vec<Check>,
}

impl ReportWriter {
    pub fn new() -> Self {
        Self::default()
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    pub fn open(&mut self, name: impl Into<String>) {
        let name = name.into();
        self.indent();
        writeln!(self.out, "{name}:").unwrap();
        self.scopes.push(name);
        self.depth += 1;
    }

    pub fn close(&mut self) {
        self.depth -= 1;
        self.scopes.pop();
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.indent();
        writeln!(self.out, "{key}: {value}").unwrap();
    }

    pub fn scalar(&mut self, key: &str, value: &Scalar) {
        self.kv(key, format_scalar(value));
    }

    pub fn check(&mut self, name: &str, passed: bool) -> bool {
        self.kv(&format!("check {name}"), if passed { "pass" } else { "FAIL" });
        self.checks.push(Check {
            scope: self.scopes.join("/"),
            name: name.to_string(),
            passed,
        });
        passed
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn finish(self) -> (String, Vec<Check>) {
        (self.out, self.checks)
    }
}

/// Space-separated labels of the columns in the support, or `-` when empty.
pub fn support_labels(inst: &Instance, x: &SolutionVector) -> String {
    let labels: Vec<&str> = x.support().iter().map(|&j| inst.label(j)).collect();
    if labels.is_empty() {
        "-".into()
    } else {
        labels.join(" ")
    }
}

pub fn scalar_list(values: &[Scalar]) -> String {
    if values.is_empty() {
        "-".into()
    } else {
        values.iter().map(format_scalar).collect::<Vec<_>>().join(" ")
    }
}
