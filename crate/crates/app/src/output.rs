//! Artifact writing, fixed float formatting and the run manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::AppError;

pub const MANIFEST: &str = "manifest.json";

/// Significant digits kept in JSON floats.
const JSON_DIGITS: usize = 12;

/// `x` rounded to a fixed number of significant digits, so that the shortest
/// round-trip rendering is stable.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.*e}", JSON_DIGITS - 1).parse().expect("formatted float parses")
}

fn canonicalize(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize),
        Value::Object(map) => map.values_mut().for_each(canonicalize),
        _ => {}
    }
}

/// Pretty JSON with rounded floats, keys sorted, and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("artifact serializes");
    canonicalize(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

/// Fixed-precision float for CSV cells.
pub fn csv_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.9}")
    } else {
        x.to_string()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ArtifactRecord {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
    /// Written after a budget was exceeded; contents are incomplete.
    pub partial: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
    pub subcommand: String,
    pub config_sha256: String,
    pub preset: Option<String>,
    /// Hash of the generator set.
    pub group: String,
    pub workers: usize,
    pub seed: u64,
    pub status: String,
    pub message: Option<String>,
    pub timings: Vec<Timing>,
    pub artifacts: Vec<ArtifactRecord>,
}

/// Output directory of one run: writes artifacts, records timings and
/// enforces the wall-clock budget between stages.
pub struct RunContext {
    pub out: PathBuf,
    started: Instant,
    timeout_secs: f64,
    pub artifacts: Vec<ArtifactRecord>,
    pub timings: Vec<Timing>,
}

impl RunContext {
    pub fn new(out: &Path, timeout_secs: f64) -> Result<Self, AppError> {
        std::fs::create_dir_all(out).map_err(|e| AppError::io(out, e))?;
        Ok(Self {
            out: out.to_owned(),
            started: Instant::now(),
            timeout_secs,
            artifacts: Vec::new(),
            timings: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, contents: &str, partial: bool) -> Result<(), AppError> {
        let path = self.out.join(name);
        std::fs::write(&path, contents).map_err(|e| AppError::io(&path, e))?;
        self.artifacts.push(ArtifactRecord {
            path: name.to_owned(),
            bytes: contents.len(),
            sha256: hex::encode(Sha256::digest(contents.as_bytes())),
            partial,
        });
        Ok(())
    }

    /// Runs one stage, records its duration, then checks the budget.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> Result<T, AppError>) -> Result<T, AppError> {
        let start = Instant::now();
        let out = f()?;
        self.timings.push(Timing {
            stage: name.to_owned(),
            seconds: start.elapsed().as_secs_f64(),
        });
        let elapsed = self.started.elapsed().as_secs_f64();
        if elapsed > self.timeout_secs {
            return Err(AppError::Budget(format!(
                "wall-clock budget of {} s exceeded after stage {name} ({elapsed:.1} s)",
                self.timeout_secs
            )));
        }
        Ok(out)
    }

    pub fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_rounded_in_json() {
        #[derive(Serialize)]
        struct S {
            b: f64,
            a: Vec<f64>,
        }
        let s = to_json(&S {
            b: 0.1 + 0.2,
            a: vec![1.0, f64::NAN, 2.0 / 3.0],
        });
        assert_eq!(s, "{\n  \"a\": [\n    1.0,\n    null,\n    0.666666666667\n  ],\n  \"b\": 0.3\n}\n");
    }

    #[test]
    fn csv_floats() {
        assert_eq!(csv_float(1000.0), "1000.000000000");
        assert_eq!(csv_float(f64::INFINITY), "inf");
    }
}
