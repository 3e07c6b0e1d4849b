use std::fs::{self, File};
use std::io::{BufRead, BufReader};
use std::path::PathBuf;

use clap::Args;
use hopscan::analytics::{compare_models, plot_rows, write_plot_csv, HopCountDistribution, ModelComparison};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::manifest::{self, Clock};
use crate::Failure;

#[derive(Debug, Args)]
pub struct FitArgs {
    /// `paths.jsonl` from a detect run.
    #[arg(long, conflicts_with = "counts", required_unless_present = "counts")]
    pub paths: Option<PathBuf>,
    /// CSV with `hops,count` rows.
    #[arg(long)]
    pub counts: Option<PathBuf>,
    /// Extra or replacement count for one level, as `HOPS=COUNT`.
    #[arg(long = "count", value_parser = parse_count)]
    pub extra: Vec<(usize, u64)>,
    /// Levels counted from a paths file.
    #[arg(long, default_value_t = 2)]
    pub min_level: usize,
    #[arg(long, default_value_t = 6)]
    pub max_level: usize,
    /// Output directory.
    #[arg(short, long)]
    pub out: PathBuf,
}

fn parse_count(s: &str) -> Result<(usize, u64), String> {
    let (h, c) = s.split_once('=').ok_or("expected HOPS=COUNT")?;
    Ok((
        h.trim().parse().map_err(|_| format!("bad hop level {h:?}"))?,
        c.trim().parse().map_err(|_| format!("bad count {c:?}"))?,
    ))
}

#[derive(Serialize)]
struct FitReport<'a> {
    distribution: &'a [(usize, u64)],
    #[serde(flatten)]
    comparison: &'a ModelComparison,
}

pub fn run(args: FitArgs) -> Result<(), Failure> {
    let clock = Clock::start();
    let (input, mut dist) = match (&args.paths, &args.counts) {
        (Some(p), _) => (p.clone(), from_paths(p, args.min_level, args.max_level)?),
        (None, Some(c)) => (c.clone(), from_counts(c)?),
        (None, None) => return Err(Failure::config("pass --paths or --counts")),
    };
    for &(h, c) in &args.extra {
        dist = dist.with_count(h, c).map_err(|e| Failure::config(e.to_string()))?;
    }
    let cmp = compare_models(&dist).map_err(|e| Failure::config(e.to_string()))?;

    manifest::create_dir(&args.out)?;
    let fit_path = args.out.join("fit.json");
    let plot_path = args.out.join("fit_plot.csv");
    let report = FitReport { distribution: dist.points(), comparison: &cmp };
    let mut text = serde_json::to_string_pretty(&report).map_err(Failure::output)?;
    text.push('\n');
    fs::write(&fit_path, text).map_err(Failure::output)?;
    let plot = File::create(&plot_path).map_err(Failure::output)?;
    write_plot_csv(plot, &plot_rows(&dist, &cmp)).map_err(Failure::output)?;

    println!(
        "power law: k = {:.4}, AIC = {:.2}, RMSE = {:.2}",
        cmp.power_law.exponent, cmp.power_law.aic, cmp.power_law.rmse
    );
    println!(
        "exponential: lambda = {:.4}, AIC = {:.2}, RMSE = {:.2}",
        cmp.exponential.exponent, cmp.exponential.aic, cmp.exponential.rmse
    );
    println!("preferred: {:?}{}", cmp.preferred, if cmp.tie { " (tie)" } else { "" });

    let config = json!({ "min_level": args.min_level, "max_level": args.max_level, "extra_counts": args.extra });
    let stats = json!({ "levels": dist.points().len() });
    manifest::write(&args.out, "fit", &clock, &[input], config, &[fit_path, plot_path], stats)
}

fn from_paths(path: &PathBuf, min: usize, max: usize) -> Result<HopCountDistribution, Failure> {
    #[derive(Deserialize)]
    struct Hops {
        hops: usize,
    }
    if min == 0 || min > max {
        return Err(Failure::config(format!("bad level range {min}..{max}")));
    }
    let file = File::open(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let mut counts = vec![0u64; max + 1];
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let h: Hops = serde_json::from_str(&line)
            .map_err(|e| Failure::input(format!("{}:{}: {e}", path.display(), i + 1)))?;
        if h.hops >= min && h.hops <= max {
            counts[h.hops] += 1;
        }
    }
    let points = (min..=max).map(|h| (h, counts[h])).collect();
    HopCountDistribution::new(points).map_err(|e| Failure::config(e.to_string()))
}

fn from_counts(path: &PathBuf) -> Result<HopCountDistribution, Failure> {
    #[derive(Deserialize)]
    struct Row {
        hops: usize,
        count: u64,
    }
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let mut points: Vec<(usize, u64)> = Vec::new();
    for row in rdr.deserialize::<Row>() {
        let row = row.map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        points.push((row.hops, row.count));
    }
    points.sort_unstable();
    HopCountDistribution::new(points).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}
