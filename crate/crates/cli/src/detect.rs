use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use hopscan::analytics::{render_table, summarize, write_summary_csv, write_summary_json};
use hopscan::ingest::{parse_file, ParsedDataset, RecordRow, RejectedRow};
use hopscan::pathfinder::find_paths;
use hopscan::{prepare, ArbitragePath, Usd};
use serde::Serialize;
use serde_json::json;

use crate::config::{DetectFlags, RunConfig};
use crate::manifest::{self, Clock};
use crate::Failure;

#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Dataset files (CSV or JSONL).
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Output directory.
    #[arg(short, long)]
    pub out: PathBuf,
    /// Do not print the summary table.
    #[arg(short, long)]
    pub quiet: bool,
    #[command(flatten)]
    pub flags: DetectFlags,
}

/// One line of `paths.jsonl`.
#[derive(Serialize)]
pub struct PathLine<'a> {
    pub hops: usize,
    pub chain_path: String,
    pub duration_secs: i64,
    pub gross_profit_usd: Usd,
    pub actor: &'a str,
    pub tokens: Vec<String>,
    pub transactions: Vec<RecordRow<'a>>,
}

impl<'a> PathLine<'a> {
    pub fn new(path: &'a ArbitragePath) -> Self {
        PathLine {
            hops: path.hops(),
            chain_path: path.chain_path_label(),
            duration_secs: path.duration_secs(),
            gross_profit_usd: path.gross_profit_usd(),
            actor: path.actor(),
            tokens: path.token_symbols(),
            transactions: path.transactions().iter().map(RecordRow::from).collect(),
        }
    }
}

/// Reads every input; rows failing validation are collected, not fatal.
pub fn load(inputs: &[PathBuf], cfg: &RunConfig) -> Result<ParsedDataset, Failure> {
    let mut data = ParsedDataset::default();
    for (i, path) in inputs.iter().enumerate() {
        let format = cfg.format_for(path)?;
        let parsed = parse_file(path, format).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        data = if i == 0 { parsed } else { data.merge(parsed) };
    }
    Ok(data)
}

pub fn run(args: DetectArgs) -> Result<(), Failure> {
    let clock = Clock::start();
    let cfg = RunConfig::resolve(&args.flags)?;
    let map = cfg.token_map()?;
    let pool = cfg.pool()?;
    manifest::create_dir(&args.out)?;

    let t = Instant::now();
    let data = load(&args.inputs, &cfg)?;
    let parse_secs = t.elapsed().as_secs_f64();
    let read = data.records.len() + data.rejected.len();
    let rejected = data.rejected;
    if !rejected.is_empty() {
        eprintln!("hopscan: {} rows rejected, see rejects.csv", rejected.len());
    }

    let t = Instant::now();
    let (admissible, paths) = pool.install(|| {
        let index = prepare(data.records, &map);
        let paths = find_paths(&index, &cfg.detection);
        let n = index.len();
        // The process exits soon; freeing millions of records costs seconds.
        std::mem::forget(index);
        (n, paths)
    });
    let detect_secs = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let report = summarize(&paths);
    let outputs = write_outputs(&args.out, &paths, &report, &rejected)?;
    let write_secs = t.elapsed().as_secs_f64();
    if !args.quiet {
        print!("{}", render_table(&report));
        println!("{} paths", report.total_paths);
    }

    let stats = json!({
        "rows_read": read,
        "rows_rejected": rejected.len(),
        "records_admissible": admissible,
        "paths": paths.len(),
        "hop_histogram": report.hop_histogram(),
        "phase_secs": { "parse": parse_secs, "detect": detect_secs, "write": write_secs },
    });
    manifest::write(&args.out, "detect", &clock, &args.inputs, &cfg, &outputs, stats)
}

fn write_outputs(
    dir: &Path,
    paths: &[ArbitragePath],
    report: &hopscan::analytics::SummaryReport,
    rejected: &[RejectedRow],
) -> Result<Vec<PathBuf>, Failure> {
    let out = |name: &str| dir.join(name);
    let create = |p: &Path| File::create(p).map(BufWriter::new).map_err(|e| Failure::output(format!("{}: {e}", p.display())));

    let mut w = create(&out("paths.jsonl"))?;
    for path in paths {
        serde_json::to_writer(&mut w, &PathLine::new(path)).map_err(Failure::output)?;
        w.write_all(b"\n").map_err(Failure::output)?;
    }
    w.flush().map_err(Failure::output)?;

    write_summary_csv(create(&out("summary.csv"))?, report).map_err(Failure::output)?;
    let mut w = create(&out("summary.json"))?;
    write_summary_json(&mut w, report).map_err(Failure::output)?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(Failure::output)?;

    let mut w = csv::Writer::from_writer(create(&out("rejects.csv"))?);
    w.write_record(["line", "hash", "reason"]).map_err(Failure::output)?;
    for r in rejected {
        w.write_record([r.line.to_string(), r.hash.clone().unwrap_or_default(), r.reason.clone()])
            .map_err(Failure::output)?;
    }
    w.flush().map_err(Failure::output)?;

    Ok(["paths.jsonl", "summary.csv", "summary.json", "rejects.csv"].map(out).to_vec())
}
