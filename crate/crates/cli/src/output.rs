use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::manifest::RunManifest;

/// Process outcome, mapped onto exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok,
    /// A reported quantity is only a bound because a cap or budget ran out.
    Bounded,
    Verification,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Verification => 2,
            Status::Bounded => 3,
        }
    }
}

/// What a command produced: a JSON body, a human rendering, files for
/// `--out`, and how the run went.
pub struct Report {
    pub name: &'static str,
    pub body: Value,
    pub lines: Vec<String>,
    pub artifacts: Vec<(String, String)>,
    pub status: Status,
}

impl Report {
    pub fn new(name: &'static str, body: impl Serialize) -> Result<Self> {
        Ok(Report {
            name,
            body: serde_json::to_value(body)?,
            lines: Vec::new(),
            artifacts: Vec::new(),
            status: Status::Ok,
        })
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn artifact(&mut self, file: impl Into<String>, content: impl Into<String>) {
        self.artifacts.push((file.into(), content.into()));
    }

    /// Keeps the worst status seen.
    pub fn flag(&mut self, s: Status) {
        self.status = self.status.max(s);
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    manifest: &'a RunManifest,
    report: &'a Value,
}

pub fn json(report: &Report, manifest: &RunManifest) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope {
        manifest,
        report: &report.body,
    })?;
    s.push('\n');
    Ok(s)
}

pub fn table(report: &Report, manifest: &RunManifest) -> String {
    let mut out = String::new();
    for l in &report.lines {
        out.push_str(l);
        out.push('\n');
    }
    out.push_str(&format!(
        "-- gadgetry {} seed {}",
        manifest.version, manifest.seed
    ));
    if let Some(ms) = manifest.timing_ms {
        out.push_str(&format!(" in {ms} ms"));
    }
    out.push('\n');
    for (k, v) in &manifest.inputs {
        out.push_str(&format!("-- {k} sha256 {}\n", &v[..16]));
    }
    out
}

pub fn write_out(dir: &Path, report: &Report, manifest: &RunManifest) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let main = dir.join(format!("{}.json", report.name));
    fs::write(&main, json(report, manifest)?)
        .with_context(|| format!("writing {}", main.display()))?;
    for (file, content) in &report.artifacts {
        let path = dir.join(file);
        fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}
