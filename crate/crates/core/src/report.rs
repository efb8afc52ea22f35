//! Structured pass/fail reports shared by the verification routines.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) -> bool {
        self.checks.push(Check { name: name.into(), passed, detail: None });
        passed
    }

    pub fn check_with(&mut self, name: impl Into<String>, passed: bool, detail: impl FnOnce() -> String) -> bool {
        let detail = (!passed).then(detail);
        self.checks.push(Check { name: name.into(), passed, detail });
        passed
    }

    pub fn fail(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed: false, detail: Some(detail.into()) });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        let prefix = other.title.clone();
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}: {}", c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "title": self.title,
            "passed": self.passed(),
            "checks": serde_json::to_value(&self.checks).unwrap_or(Value::Null),
        })
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{} [{}]", self.title, if self.passed() { "pass" } else { "FAIL" })?;
        for c in &self.checks {
            write!(f, "  {} {}", if c.passed { "ok  " } else { "FAIL" }, c.name)?;
            if let Some(d) = &c.detail {
                write!(f, " ({d})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
