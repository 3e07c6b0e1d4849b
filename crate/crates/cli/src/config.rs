//! Run configuration: TOML file first, command-line flags on top.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use hopscan::ingest::{Format, TokenEquivalenceMap};
use hopscan::{DetectionConfig, ValueTolerance};
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Debug, Clone, Default, Args)]
pub struct DetectFlags {
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Largest gap between consecutive path records [default: 300].
    #[arg(long)]
    pub window_secs: Option<i64>,
    /// Lowest accepted v_in / v_out between linked records [default: 0.98].
    #[arg(long)]
    pub value_tolerance: Option<String>,
    /// Shortest reported path, in hops [default: 3].
    #[arg(long)]
    pub min_hops: Option<usize>,
    /// Longest path searched, in hops [default: 6].
    #[arg(long)]
    pub max_hops: Option<usize>,
    /// Input format; guessed from the file extension when absent.
    #[arg(long)]
    pub format: Option<String>,
    /// Extra `chain,raw_symbol,canonical_symbol` entries on top of the
    /// builtin token map.
    #[arg(long)]
    pub token_map: Option<PathBuf>,
    /// Recorded in the manifest; detection itself is not randomized.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Detection threads: a number or `auto`.
    #[arg(long)]
    pub threads: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    window_secs: Option<i64>,
    value_tolerance: Option<ValueTolerance>,
    min_hops: Option<usize>,
    max_hops: Option<usize>,
    format: Option<String>,
    token_map: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<toml::Value>,
}

/// Effective settings of one run, as recorded in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub detection: DetectionConfig,
    pub format: Option<Format>,
    pub token_map: Option<PathBuf>,
    pub seed: Option<u64>,
    /// 0 means one thread per core.
    pub threads: usize,
}

impl RunConfig {
    pub fn resolve(flags: &DetectFlags) -> Result<Self, Failure> {
        let file = match &flags.config {
            Some(path) => read_config(path)?,
            None => FileConfig::default(),
        };
        let base = DetectionConfig::default();
        let tolerance = match &flags.value_tolerance {
            Some(s) => s
                .parse::<ValueTolerance>()
                .map_err(|e| Failure::config(format!("--value-tolerance {s}: {e}")))?,
            None => file.value_tolerance.unwrap_or(base.value_tolerance()),
        };
        let detection = DetectionConfig::new(
            flags.window_secs.or(file.window_secs).unwrap_or(base.window_secs()),
            tolerance,
            flags.min_hops.or(file.min_hops).unwrap_or(base.min_hops()),
            flags.max_hops.or(file.max_hops).unwrap_or(base.max_hops()),
        )
        .map_err(|e| Failure::config(e.to_string()))?;

        let format = flags
            .format
            .clone()
            .or(file.format)
            .map(|f| f.parse::<Format>())
            .transpose()
            .map_err(|e| Failure::config(e.to_string()))?;
        let threads = match (&flags.threads, &file.threads) {
            (Some(s), _) => parse_threads(s)?,
            (None, Some(toml::Value::Integer(n))) if *n >= 0 => *n as usize,
            (None, Some(toml::Value::String(s))) => parse_threads(s)?,
            (None, Some(other)) => return Err(Failure::config(format!("threads: {other}"))),
            (None, None) => 0,
        };
        Ok(RunConfig {
            detection,
            format,
            token_map: flags.token_map.clone().or(file.token_map),
            seed: flags.seed.or(file.seed),
            threads,
        })
    }

    pub fn token_map(&self) -> Result<TokenEquivalenceMap, Failure> {
        let mut map = TokenEquivalenceMap::builtin();
        if let Some(path) = &self.token_map {
            let file = fs::File::open(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            map.extend_from_csv(file)
                .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
        }
        Ok(map)
    }

    pub fn format_for(&self, path: &Path) -> Result<Format, Failure> {
        match self.format {
            Some(f) => Ok(f),
            None => Format::from_path(path)
                .map_err(|_| Failure::config(format!("{}: cannot tell the format, pass --format", path.display()))),
        }
    }

    pub fn pool(&self) -> Result<rayon::ThreadPool, Failure> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Failure::config(e.to_string()))
    }
}

fn read_config(path: &Path) -> Result<FileConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn parse_threads(s: &str) -> Result<usize, Failure> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(0);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Failure::config(format!("--threads expects a positive number or auto, got {s:?}"))),
    }
}
