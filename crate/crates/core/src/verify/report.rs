//! Suite profiles and report formatting.

use std::fmt::Write;
use std::str::FromStr;

use super::runner::{Status, Suite, Verdict};

/// Which failures a run treats as predicted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Profile {
    /// Every failure counts.
    #[default]
    Strict,
    /// Failures the dimension theorems predict for a builtin are expected.
    Builtin,
}

impl Profile {
    /// Suites predicted to fail on the named builtin (or a model derived from one).
    pub fn expected_failures(self, model: &str) -> Vec<Suite> {
        if self == Profile::Strict {
            return Vec::new();
        }
        if model == "cross7" || model.starts_with("phi(octonion") {
            return vec![Suite::Assoc];
        }
        match model.strip_prefix("zerowedge").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if n >= 2 => vec![Suite::Vpa, Suite::Assoc],
            _ => Vec::new(),
        }
    }
}

impl FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "strict" => Ok(Profile::Strict),
            "builtin" => Ok(Profile::Builtin),
            _ => Err(format!("unknown profile `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputMode {
    #[default]
    Human,
    Tsv,
}

impl FromStr for OutputMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "human" => Ok(OutputMode::Human),
            "tsv" => Ok(OutputMode::Tsv),
            _ => Err(format!("unknown output mode `{s}`")),
        }
    }
}

/// The verdicts of one suite on one model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub suite: Suite,
    pub model: String,
    pub verdicts: Vec<Verdict>,
}

impl Section {
    /// Marks failures the profile predicts for this model and suite.
    pub fn new(suite: Suite, model: &str, mut verdicts: Vec<Verdict>, profile: Profile) -> Section {
        if profile.expected_failures(model).contains(&suite) {
            for v in verdicts.iter_mut().filter(|v| v.status == Status::Fail) {
                v.expected = true;
            }
        }
        Section { suite, model: model.to_string(), verdicts }
    }

    pub fn ok(&self) -> bool {
        verdicts_ok(&self.verdicts)
    }
}

/// True when every verdict passed, was skipped, or failed as expected.
pub fn verdicts_ok(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.status != Status::Fail || v.expected)
}

fn status_text(v: &Verdict, mode: OutputMode) -> &'static str {
    match (v.status, v.expected, mode) {
        (Status::Fail, true, OutputMode::Human) => "fail (expected)",
        (s, _, _) => s.name(),
    }
}

/// One line per verdict and a trailing `TOTAL passed/n`.
pub fn format_report(sections: &[Section], mode: OutputMode) -> String {
    let mut out = String::new();
    let (mut passed, mut total) = (0, 0);
    for s in sections {
        if mode == OutputMode::Human {
            let p = s.verdicts.iter().filter(|v| v.status == Status::Pass).count();
            let _ = writeln!(out, "# {} suite on {}: {p}/{} pass", s.suite, s.model, s.verdicts.len());
        }
        for v in &s.verdicts {
            let detail = match (v.expected, mode) {
                (true, OutputMode::Tsv) => format!("expected failure; {}", v.detail),
                _ => v.detail.clone(),
            };
            let status = status_text(v, mode);
            let _ = match mode {
                OutputMode::Tsv => writeln!(out, "{}\t{status}\t{detail}", v.id),
                OutputMode::Human => writeln!(out, "{:<44} {status:<16} {detail}", v.id),
            };
            passed += usize::from(v.status == Status::Pass);
            total += 1;
        }
    }
    let _ = writeln!(out, "TOTAL {passed}/{total}");
    out
}
