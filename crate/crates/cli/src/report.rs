use rayon::prelude::*;
use serde_json::{json, Value};

/// Failures kept per check for the counterexample dump.
const MAX_DUMPED: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: 0,
            total: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn record(&mut self, outcome: Result<(), String>) {
        self.total += 1;
        match outcome {
            Ok(()) => self.passed += 1,
            Err(e) if self.failures.len() < MAX_DUMPED => self.failures.push(e),
            Err(_) => {}
        }
    }

    pub fn expect(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.record(if ok { Ok(()) } else { Err(describe()) });
    }

    /// Runs `f` over `items` on the pool and records the results in order.
    pub fn run_all<T, F>(&mut self, items: &[T], f: F)
    where
        T: Sync,
        F: Fn(&T) -> Result<(), String> + Sync,
    {
        let outcomes: Vec<Result<(), String>> = items.par_iter().map(&f).collect();
        for o in outcomes {
            self.record(o);
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "total": self.total,
            "ok": self.ok(),
            "failures": self.failures,
            "notes": self.notes,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "ok": self.ok(),
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
        })
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar_text).collect();
            rows.push((prefix.to_string(), format!("[{}]", joined.join(", "))));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar_text(other))),
    }
}

/// Two-column `key  value` rendering of any JSON document.
pub fn render_table(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, x)| format!("{k:<width$}  {x}\n"))
        .collect()
}

/// A verification report as a table: one row per check.
pub fn render_suite_table(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        for c in &r.checks {
            let status = if c.ok() { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status}  {:<12} {:<40} {}/{}\n",
                r.suite, c.name, c.passed, c.total
            ));
            for f in &c.failures {
                out.push_str(&format!("      counterexample: {f}\n"));
            }
            for n in &c.notes {
                out.push_str(&format!("      note: {n}\n"));
            }
        }
    }
    out
}
