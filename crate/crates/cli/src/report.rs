//! Deterministic reports: header (version, config echo, seed, tolerances),
//! command body, assertion checks.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::config::{Format, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One numeric assertion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= bound`; NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, lower: None, upper: Some(bound), pass: value <= bound }
    }

    pub fn within(name: impl Into<String>, value: f64, lower: f64, upper: f64) -> Self {
        Self { name: name.into(), value, lower: Some(lower), upper: Some(upper), pass: (lower..=upper).contains(&value) }
    }

    /// Reported value without a bound.
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        Self { name: name.into(), value, lower: None, upper: None, pass: true }
    }

    /// Exact integer comparison.
    pub fn equals(name: impl Into<String>, value: usize, expected: usize) -> Self {
        let (v, e) = (value as f64, expected as f64);
        Self { name: name.into(), value: v, lower: Some(e), upper: Some(e), pass: value == expected }
    }

    fn bound_text(&self) -> String {
        match (self.lower, self.upper) {
            (Some(l), Some(u)) if l == u => format!("== {}", fmt_num(l)),
            (Some(l), Some(u)) => format!("in [{}, {}]", fmt_num(l), fmt_num(u)),
            (None, Some(u)) => format!("<= {}", fmt_num(u)),
            (Some(l), None) => format!(">= {}", fmt_num(l)),
            (None, None) => "(info)".to_string(),
        }
    }
}

/// Named group of checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Suite {
    pub id: u32,
    pub name: String,
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn new(id: u32, name: &str) -> Self {
        Self { id, name: name.to_string(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || (v.fract() == 0.0 && v.abs() < 1e6) {
        format!("{v}")
    } else {
        format!("{v:.6e}")
    }
}

/// Full run output.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config: RunConfig,
    pub tolerances: BTreeMap<String, f64>,
    pub suites: Vec<Suite>,
    pub passed: bool,
    pub result: serde_json::Value,
    #[serde(skip)]
    pub body_text: String,
    #[serde(skip)]
    pub csv: Option<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64, config: RunConfig, tolerances: BTreeMap<String, f64>) -> Self {
        Self {
            tool: "gaugecalc",
            version: VERSION,
            command: command.to_string(),
            seed,
            config,
            tolerances,
            suites: Vec::new(),
            passed: true,
            result: serde_json::Value::Null,
            body_text: String::new(),
            csv: None,
        }
    }

    pub fn add_suite(&mut self, suite: Suite) {
        self.passed &= suite.passed();
        self.suites.push(suite);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }

    fn config_echo(&self) -> String {
        toml::to_string(&self.config).expect("config serializes")
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.tool, self.version);
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "\n[config]");
        for line in self.config_echo().lines() {
            let _ = writeln!(out, "  {line}");
        }
        let _ = writeln!(out, "\n[tolerances]");
        for (k, v) in &self.tolerances {
            let _ = writeln!(out, "  {k} = {}", fmt_num(*v));
        }
        if !self.body_text.is_empty() {
            let _ = writeln!(out, "\n[result]");
            out.push_str(&self.body_text);
        }
        if !self.suites.is_empty() {
            let _ = writeln!(out, "\n[checks]");
            for s in &self.suites {
                let _ = writeln!(out, "{} suite {} {}", if s.passed() { "PASS" } else { "FAIL" }, s.id, s.name);
                for c in &s.checks {
                    let _ = writeln!(
                        out,
                        "    {:<4} {:<40} {:>14} {}",
                        if c.pass { "ok" } else { "FAIL" },
                        c.name,
                        fmt_num(c.value),
                        c.bound_text()
                    );
                }
            }
        }
        let passed = self.suites.iter().filter(|s| s.passed()).count();
        if self.suites.is_empty() {
            let _ = writeln!(out, "\nsummary: no assertions");
        } else {
            let _ = writeln!(out, "\nsummary: {passed}/{} suites passed: {}", self.suites.len(), if self.passed { "PASS" } else { "FAIL" });
        }
        out
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} {}", self.tool, self.version);
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# seed: {}", self.seed);
        for line in self.config_echo().lines() {
            let _ = writeln!(out, "# config: {line}");
        }
        for (k, v) in &self.tolerances {
            let _ = writeln!(out, "# tolerance: {k} = {}", fmt_num(*v));
        }
        match &self.csv {
            Some(table) => out.push_str(table),
            None => {
                out.push_str("suite,check,value,lower,upper,pass\n");
                let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
                for s in &self.suites {
                    for c in &s.checks {
                        let _ = writeln!(out, "{},{},{:e},{},{},{}", s.id, c.name, c.value, opt(c.lower), opt(c.upper), u8::from(c.pass));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_and_rendering() {
        assert!(Check::at_most("a", 1e-12, 1e-10).pass);
        assert!(!Check::at_most("a", f64::NAN, 1e-10).pass);
        assert!(!Check::within("r", 3.5, 3.6, 4.4).pass);
        assert!(Check::equals("d", 2, 2).pass);
        let mut s = Suite::new(1, "demo");
        assert!(!s.passed());
        s.push(Check::at_most("x", 0.5, 1.0));
        let mut r = Report::new("verify", 7, RunConfig::default(), BTreeMap::from([("x".to_string(), 1.0)]));
        r.add_suite(s);
        let text = r.render(Format::Text);
        assert!(text.contains("gaugecalc") && text.contains("seed: 7") && text.contains("PASS suite 1 demo"));
        let csv = r.render(Format::Csv);
        assert!(csv.contains("suite,check,value,lower,upper,pass\n1,x,5e-1,,1e0,1\n"));
        let json: serde_json::Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(json["seed"], 7);
        assert_eq!(json["passed"], true);
    }
}
