use clap::Args;
use hopscan::pathfinder::{brute_force_find, compare_results, find_paths, OracleError};
use hopscan::prepare;
use std::path::PathBuf;

use crate::config::{DetectFlags, RunConfig};
use crate::detect::load;
use crate::Failure;

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Dataset files (CSV or JSONL); at most 2,000 admissible records.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub flags: DetectFlags,
}

pub fn run(args: OracleArgs) -> Result<(), Failure> {
    let cfg = RunConfig::resolve(&args.flags)?;
    let map = cfg.token_map()?;
    let data = load(&args.inputs, &cfg)?;
    let index = prepare(data.records, &map);

    let slow = brute_force_find(index.records(), &cfg.detection).map_err(|e| match e {
        OracleError::InputTooLarge { .. } => Failure::input(e.to_string()),
    })?;
    let fast = cfg.pool()?.install(|| find_paths(&index, &cfg.detection));
    let diff = compare_results(&fast, &slow);
    if diff.is_empty() {
        println!("ok: {} records, {} paths, indexed and brute-force results agree", index.len(), fast.len());
        return Ok(());
    }
    for p in &diff.only_in_left {
        println!("indexed only: {}", p.join(" "));
    }
    for p in &diff.only_in_right {
        println!("brute force only: {}", p.join(" "));
    }
    Err(Failure {
        code: Failure::MISMATCH,
        message: format!(
            "results differ: {} indexed-only, {} brute-force-only",
            diff.only_in_left.len(),
            diff.only_in_right.len()
        ),
    })
}
