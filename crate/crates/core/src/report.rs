//! Verification reports: one row per checked case, emitted as aligned text
//! or versioned JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Precision settings a report was produced under.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionProfile {
    /// Requested absolute precision, if any (suite-specific units).
    pub precision: Option<u32>,
    /// Requested tilt / tower depth, if any.
    pub depth: Option<u32>,
    /// Comparison used by the suite: `exact` or `exact-at-precision`.
    pub comparison: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub lemma: String,
    pub parameters: BTreeMap<String, String>,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    /// Wall time; `0` unless timing was requested, so reports stay reproducible.
    pub elapsed_ms: u64,
}

impl Case {
    /// `pass` is `expected == computed`.
    pub fn compare(
        lemma: impl Into<String>,
        parameters: &[(&str, String)],
        expected: impl Into<String>,
        computed: impl Into<String>,
    ) -> Self {
        let (expected, computed) = (expected.into(), computed.into());
        Case {
            lemma: lemma.into(),
            parameters: parameters.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            pass: expected == computed,
            expected,
            computed,
            elapsed_ms: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite_id: String,
    pub seed: u64,
    pub precision: PrecisionProfile,
    pub cases: Vec<Case>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl VerificationReport {
    pub fn new(suite_id: &str, seed: u64, precision: PrecisionProfile) -> Self {
        VerificationReport {
            schema: SCHEMA_VERSION,
            suite_id: suite_id.to_string(),
            seed,
            precision,
            cases: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    /// Pretty JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(s).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        if r.schema != SCHEMA_VERSION {
            return Err(Error::parse(0, format!("unsupported schema {}", r.schema)));
        }
        Ok(r)
    }

    /// Aligned table, one row per case, followed by a summary line.
    pub fn to_text(&self) -> String {
        let header = ["lemma", "parameters", "expected", "computed", "pass", "ms"];
        let rows: Vec<[String; 6]> = self
            .cases
            .iter()
            .map(|c| {
                let params: Vec<String> = c.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
                [
                    c.lemma.clone(),
                    params.join(" "),
                    c.expected.clone(),
                    c.computed.clone(),
                    if c.pass { "PASS" } else { "FAIL" }.to_string(),
                    c.elapsed_ms.to_string(),
                ]
            })
            .collect();
        let mut width = header.map(|h| h.chars().count());
        for r in &rows {
            for (w, cell) in width.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(width).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let pad = w - cell.chars().count();
                s.push_str(cell);
                if i + 1 < cells.len() {
                    s.extend(std::iter::repeat_n(' ', pad));
                }
            }
            s.push('\n');
            s
        };
        let mut out = String::new();
        let _ = writeln!(out, "suite {} (seed {})", self.suite_id, self.seed);
        out.push_str(&line(&header.map(String::from)));
        for r in &rows {
            out.push_str(&line(r));
        }
        let passed = self.cases.iter().filter(|c| c.pass).count();
        let _ = writeln!(out, "{passed}/{} cases passed", self.cases.len());
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }

    /// Write to `path`, or to stdout when `None`.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let body = self.render(format);
        match path {
            Some(p) => std::fs::write(p, body)
                .map_err(|e| Error::Io(format!("writing {}: {e}", p.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(body.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| Error::Io(format!("writing stdout: {e}")))
            }
        }
    }
}
