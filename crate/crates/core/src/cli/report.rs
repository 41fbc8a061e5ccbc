//! The JSON report, its manifest, and file output.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::commands::Outcome;
use crate::error::Result;

pub const SCHEMA: &str = "levelset-lab/1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub experiment: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub findings: Vec<String>,
    pub pass: bool,
    pub results: Value,
}

#[derive(Serialize)]
struct OutputDigest {
    path: String,
    sha256: String,
}

/// Timestamps and digests live here so the report itself stays reproducible.
#[derive(Serialize)]
struct RunManifest<'a> {
    schema: &'static str,
    subcommand: &'a str,
    params: &'a Value,
    seed: Option<u64>,
    version: &'static str,
    rng: &'static str,
    started_unix_ms: u128,
    finished_unix_ms: u128,
    outputs: Vec<OutputDigest>,
}

pub(super) fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn digest(path: &Path, bytes: &[u8]) -> OutputDigest {
    OutputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(bytes)),
    }
}

/// Prints the report, writes the optional files, and returns `pass`.
pub(super) fn finish(name: &str, outcome: Outcome, started: u128, stdout: &mut dyn Write) -> Result<bool> {
    let report = Report {
        schema: SCHEMA,
        experiment: name.to_string(),
        params: outcome.params,
        seed: outcome.seed,
        pass: outcome.findings.is_empty(),
        findings: outcome.findings,
        results: outcome.results,
    };
    let mut bytes = serde_json::to_vec_pretty(&report).expect("report serializes");
    bytes.push(b'\n');
    stdout.write_all(&bytes)?;
    let mut outputs = Vec::new();
    if let Some((path, csv)) = &outcome.csv {
        std::fs::write(path, csv)?;
        outputs.push(digest(path, csv));
    }
    if let Some(out) = &outcome.out {
        std::fs::write(out, &bytes)?;
        outputs.push(digest(out, &bytes));
        let manifest = RunManifest {
            schema: SCHEMA,
            subcommand: name,
            params: &report.params,
            seed: report.seed,
            version: env!("CARGO_PKG_VERSION"),
            rng: crate::rng::ALGORITHM,
            started_unix_ms: started,
            finished_unix_ms: now_ms(),
            outputs,
        };
        let mut m = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        m.push(b'\n');
        std::fs::write(manifest_path(out), m)?;
    }
    Ok(report.pass)
}
