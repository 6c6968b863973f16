//! Findings from checks, one record per failure.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    pub code: String,
    pub location: String,
    pub detail: String,
}

impl Finding {
    pub fn new(code: impl Into<String>, location: impl Into<String>, detail: impl Into<String>) -> Self {
        Finding { code: code.into(), location: location.into(), detail: detail.into() }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.code, self.location, self.detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, code: impl Into<String>, location: impl Into<String>, detail: impl Into<String>) {
        self.findings.push(Finding::new(code, location, detail));
    }

    pub fn extend(&mut self, other: Report) {
        self.findings.extend(other.findings);
    }

    pub fn is_ok(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.findings.iter().any(|f| f.code == code)
    }

    /// Findings in a stable order.
    pub fn sorted(mut self) -> Self {
        self.findings.sort();
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        Ok(())
    }
}
