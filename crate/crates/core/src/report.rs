//! Plain-text verification reports.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub title: String,
    pub lines: Vec<String>,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> Self {
        VerificationReport {
            title: title.into(),
            lines: Vec::new(),
            failure: None,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Records a failure; only the first one is kept.
    pub fn fail(&mut self, s: impl Into<String>) {
        if self.failure.is_none() {
            self.failure = Some(s.into());
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Appends another report's lines under its title and inherits its failure.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.lines.push(format!("[{}]", other.title));
        for l in other.lines {
            self.lines.push(format!("  {l}"));
        }
        if let Some(f) = other.failure {
            self.fail(format!("{}: {f}", other.title));
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for l in &self.lines {
            writeln!(f, "  {l}")?;
        }
        match &self.failure {
            None => writeln!(f, "PASS"),
            Some(why) => writeln!(f, "FAIL: {why}"),
        }
    }
}
