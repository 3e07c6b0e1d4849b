use std::fs::{self, File};
use std::io::{self, BufReader, Read};
use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::{SecondsFormat, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::Failure;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub bytes: u64,
    pub sha256: String,
}

pub fn digest(path: &Path) -> io::Result<FileDigest> {
    let mut reader = BufReader::with_capacity(1 << 20, File::open(path)?);
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 20];
    let mut bytes = 0u64;
    loop {
        let n = reader.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
        bytes += n as u64;
    }
    Ok(FileDigest {
        path: path.to_path_buf(),
        bytes,
        sha256: hex::encode(hasher.finalize()),
    })
}

/// Provenance record written next to every run's outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: Vec<FileDigest>,
    pub config: C,
    pub started_at: String,
    pub finished_at: String,
    pub wall_secs: f64,
    pub outputs: Vec<FileDigest>,
    pub stats: serde_json::Value,
}

pub struct Clock {
    started_at: String,
    start: Instant,
}

impl Clock {
    pub fn start() -> Self {
        Clock {
            started_at: now(),
            start: Instant::now(),
        }
    }

    pub fn elapsed_secs(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub fn write<C: Serialize>(
    dir: &Path,
    command: &'static str,
    clock: &Clock,
    inputs: &[PathBuf],
    config: C,
    outputs: &[PathBuf],
    stats: serde_json::Value,
) -> Result<(), Failure> {
    write_named(dir, "manifest.json", command, clock, inputs, config, outputs, stats)
}

#[allow(clippy::too_many_arguments)]
pub fn write_named<C: Serialize>(
    dir: &Path,
    name: &str,
    command: &'static str,
    clock: &Clock,
    inputs: &[PathBuf],
    config: C,
    outputs: &[PathBuf],
    stats: serde_json::Value,
) -> Result<(), Failure> {
    let inputs = inputs
        .iter()
        .map(|p| digest(p))
        .collect::<io::Result<Vec<_>>>()
        .map_err(|e| Failure::input(e.to_string()))?;
    let outputs = outputs
        .iter()
        .map(|p| digest(p))
        .collect::<io::Result<Vec<_>>>()
        .map_err(Failure::output)?;
    let manifest = RunManifest {
        tool: "hopscan",
        version: env!("CARGO_PKG_VERSION"),
        command,
        inputs,
        config,
        started_at: clock.started_at.clone(),
        finished_at: now(),
        wall_secs: clock.elapsed_secs(),
        outputs,
        stats,
    };
    let mut text = serde_json::to_string_pretty(&manifest).map_err(Failure::output)?;
    text.push('\n');
    fs::write(dir.join(name), text).map_err(Failure::output)
}

pub fn create_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::output(format!("{}: {e}", dir.display())))
}
