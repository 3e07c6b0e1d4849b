//! Per-path metrics, aggregate summaries and report export.

mod fit;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use serde::Serialize;

use crate::model::{ArbitragePath, Chain};
use crate::usd::Usd;

pub use fit::{
    compare_models, fit_model, plot_rows, write_plot_csv, FitError, FitResult, HopCountDistribution,
    ModelComparison, ModelKind, PlotRow,
};

/// `v_out` of the last swap minus `v_in` of the first. Exact; may be
/// negative.
pub fn gross_profit(path: &ArbitragePath) -> Usd {
    path.last().value_out_usd() - path.first().value_in_usd()
}

/// Number of paths touching each chain; a path visiting a chain twice counts
/// once for it.
pub fn chain_frequency<'a>(paths: impl IntoIterator<Item = &'a ArbitragePath>) -> BTreeMap<Chain, usize> {
    frequency(paths.into_iter().map(|p| p.chain_path()))
}

fn frequency(chain_paths: impl Iterator<Item = Vec<Chain>>) -> BTreeMap<Chain, usize> {
    let mut freq = BTreeMap::new();
    for chains in chain_paths {
        let distinct: BTreeSet<Chain> = chains.into_iter().collect();
        for chain in distinct {
            *freq.entry(chain).or_insert(0) += 1;
        }
    }
    freq
}

/// One report line. Column order follows the conventional table layout:
/// chain path, duration, tokens, profit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathRow {
    pub chain_path: String,
    pub duration_secs: i64,
    pub tokens: String,
    pub profit_usd: Usd,
    pub hops: usize,
    pub chains: Vec<Chain>,
    pub actor: String,
    pub first_hash: String,
}

impl PathRow {
    pub fn from_path(path: &ArbitragePath) -> Self {
        PathRow {
            chain_path: path.chain_path_label(),
            duration_secs: path.duration_secs(),
            tokens: path.token_symbols().join("/"),
            profit_usd: gross_profit(path),
            hops: path.hops(),
            chains: path.chain_path(),
            actor: path.actor().to_string(),
            first_hash: path.first().hash().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopLevelStats {
    pub hops: usize,
    pub count: usize,
    pub mean_duration_secs: f64,
    pub positive_profit_count: usize,
    pub chain_frequency: BTreeMap<Chain, usize>,
}

/// Paths sharing one acting address.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActorCluster {
    pub actor: String,
    pub rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryReport {
    pub rows: Vec<PathRow>,
    pub total_paths: usize,
    pub by_hops: Vec<HopLevelStats>,
    pub positive_profit_count: usize,
    pub min_profit_usd: Option<Usd>,
    pub max_profit_usd: Option<Usd>,
    pub chain_frequency: BTreeMap<Chain, usize>,
    pub same_actor_clusters: Vec<ActorCluster>,
    /// Row pairs sharing at least one transaction.
    pub overlapping_paths: Vec<(usize, usize)>,
}

impl SummaryReport {
    /// Aggregates recomputed from rows alone. `overlapping_paths` needs the
    /// transactions and is taken as given.
    pub fn from_rows(rows: Vec<PathRow>, overlapping_paths: Vec<(usize, usize)>) -> Self {
        let mut levels: BTreeMap<usize, Vec<&PathRow>> = BTreeMap::new();
        for row in &rows {
            levels.entry(row.hops).or_default().push(row);
        }
        let by_hops = levels
            .into_iter()
            .map(|(hops, rows)| HopLevelStats {
                hops,
                count: rows.len(),
                mean_duration_secs: rows.iter().map(|r| r.duration_secs as f64).sum::<f64>()
                    / rows.len() as f64,
                positive_profit_count: rows.iter().filter(|r| r.profit_usd > Usd::ZERO).count(),
                chain_frequency: frequency(rows.iter().map(|r| r.chains.clone())),
            })
            .collect();

        let mut by_actor: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (i, row) in rows.iter().enumerate() {
            by_actor.entry(&row.actor).or_default().push(i);
        }
        let same_actor_clusters = by_actor
            .into_iter()
            .filter(|(_, members)| members.len() > 1)
            .map(|(actor, rows)| ActorCluster {
                actor: actor.to_string(),
                rows,
            })
            .collect();

        SummaryReport {
            total_paths: rows.len(),
            by_hops,
            positive_profit_count: rows.iter().filter(|r| r.profit_usd > Usd::ZERO).count(),
            min_profit_usd: rows.iter().map(|r| r.profit_usd).min(),
            max_profit_usd: rows.iter().map(|r| r.profit_usd).max(),
            chain_frequency: frequency(rows.iter().map(|r| r.chains.clone())),
            same_actor_clusters,
            overlapping_paths,
            rows,
        }
    }

    pub fn hop_level(&self, hops: usize) -> Option<&HopLevelStats> {
        self.by_hops.iter().find(|l| l.hops == hops)
    }

    pub fn hop_histogram(&self) -> Vec<(usize, usize)> {
        self.by_hops.iter().map(|l| (l.hops, l.count)).collect()
    }
}

pub fn summarize(paths: &[ArbitragePath]) -> SummaryReport {
    let rows = paths.iter().map(PathRow::from_path).collect();
    SummaryReport::from_rows(rows, overlapping_pairs(paths))
}

fn overlapping_pairs(paths: &[ArbitragePath]) -> Vec<(usize, usize)> {
    let mut owners: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, path) in paths.iter().enumerate() {
        for tx in path.transactions() {
            owners.entry(tx.hash()).or_default().push(i);
        }
    }
    let mut pairs = BTreeSet::new();
    for rows in owners.values() {
        for (k, &a) in rows.iter().enumerate() {
            for &b in &rows[k + 1..] {
                if a != b {
                    pairs.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    pairs.into_iter().collect()
}

/// Mean rounded to 0.1 s for display.
pub fn display_seconds(mean: f64) -> String {
    format!("{mean:.1}")
}

/// Rows as CSV with profits rounded to cents.
pub fn write_summary_csv<W: Write>(writer: W, report: &SummaryReport) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["chain_path", "duration_secs", "tokens", "profit_usd", "hops", "actor", "first_hash"])?;
    for row in &report.rows {
        w.write_record([
            row.chain_path.clone(),
            row.duration_secs.to_string(),
            row.tokens.clone(),
            row.profit_usd.display_cents(),
            row.hops.to_string(),
            row.actor.clone(),
            row.first_hash.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_json<W: Write>(writer: W, report: &SummaryReport) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(writer, report)
}

/// Fixed-width table for terminals.
pub fn render_table(report: &SummaryReport) -> String {
    let mut out = format!("{:<28} {:>9} {:<22} {:>12}\n", "Chain Path", "Dur.(s)", "Tokens", "Profit($)");
    for row in &report.rows {
        out.push_str(&format!(
            "{:<28} {:>9} {:<22} {:>12}\n",
            row.chain_path,
            row.duration_secs,
            row.tokens,
            row.profit_usd.display_cents()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::DetectionConfig;
    use crate::model::test_support::{bridge, swap};
    use crate::model::TransactionRecord;

    fn path(prefix: &str, actor: &str, chains: &[Chain], t0: i64, vin_cents: i64, vout_cents: i64) -> ArbitragePath {
        let mut txs: Vec<TransactionRecord> = Vec::new();
        let mut t = t0;
        for (i, &chain) in chains.iter().enumerate() {
            let mut s = swap(&format!("{prefix}s{i}"), t, actor, chain, "USDC", "BAL", 1000, 1000).into_parts();
            if i == 0 {
                s.value_in_usd = Usd::from_cents(vin_cents);
            }
            if i + 1 == chains.len() {
                s.value_out_usd = Usd::from_cents(vout_cents);
            }
            s.token_in = crate::model::CanonicalToken::raw(if i == 0 { "USDC" } else { "BAL" });
            txs.push(TransactionRecord::new(s).unwrap());
            t += 10;
            if let Some(&next) = chains.get(i + 1) {
                txs.push(bridge(&format!("{prefix}b{i}"), t, actor, actor, chain, next, "BAL", 1000, 1000));
                t += 10;
            }
        }
        ArbitragePath::try_new(txs, &DetectionConfig::default().with_hops(2, 6).unwrap()).unwrap()
    }

    #[test]
    fn gross_profit_examples() {
        let p = path("a", "x", &[Chain::Base, Chain::Ethereum, Chain::Base], 0, 100_000, 103_278);
        assert_eq!(gross_profit(&p), Usd::from_cents(3278));
        assert_eq!(gross_profit(&p), p.gross_profit_usd());
        let loss = path("b", "x", &[Chain::Arbitrum, Chain::Optimism, Chain::Base], 0, 100_000, 74_493);
        assert_eq!(gross_profit(&loss), Usd::from_cents(-25_507));
        let flat = path("c", "x", &[Chain::Arbitrum, Chain::Optimism, Chain::Base], 0, 100_000, 100_000);
        assert_eq!(gross_profit(&flat), Usd::ZERO);
    }

    #[test]
    fn chain_frequency_counts_each_path_once() {
        let paths = vec![
            path("a", "x", &[Chain::Base, Chain::Ethereum, Chain::Base], 0, 1, 1),
            path("b", "y", &[Chain::Arbitrum, Chain::Optimism, Chain::Base], 0, 1, 1),
        ];
        let freq = chain_frequency(&paths);
        assert_eq!(freq[&Chain::Base], 2);
        assert_eq!(freq[&Chain::Ethereum], 1);
        assert_eq!(freq.get(&Chain::Polygon), None);
        assert!(chain_frequency(&[]).is_empty());
    }

    #[test]
    fn summary_aggregates() {
        let paths = vec![
            path("a", "x", &[Chain::Base, Chain::Ethereum, Chain::Base], 0, 100_000, 103_278),
            path("b", "y", &[Chain::Arbitrum, Chain::Optimism, Chain::Base], 0, 100_000, 74_493),
            path("c", "z", &[Chain::Optimism, Chain::Base, Chain::Optimism, Chain::Base], 0, 100_000, 102_069),
            path("d", "z", &[Chain::Arbitrum, Chain::Optimism, Chain::Base, Chain::Arbitrum], 0, 100_000, 100_161),
        ];
        let report = summarize(&paths);
        assert_eq!(report.total_paths, 4);
        assert_eq!(report.positive_profit_count, 3);
        assert_eq!(report.min_profit_usd, Some(Usd::from_cents(-25_507)));
        assert_eq!(report.max_profit_usd, Some(Usd::from_cents(3278)));
        assert_eq!(report.hop_histogram(), vec![(3, 2), (4, 2)]);
        assert_eq!(report.hop_level(3).unwrap().mean_duration_secs, 40.0);
        assert_eq!(report.hop_level(4).unwrap().mean_duration_secs, 60.0);
        assert_eq!(report.same_actor_clusters, vec![ActorCluster { actor: "z".into(), rows: vec![2, 3] }]);
        assert!(report.overlapping_paths.is_empty());
        assert_eq!(report.rows[0].chain_path, "Base→Eth→Base");
        assert_eq!(report.rows[0].tokens, "USDC/BAL");

        let again = SummaryReport::from_rows(report.rows.clone(), report.overlapping_paths.clone());
        assert_eq!(again, report);
    }

    #[test]
    fn overlaps_are_flagged() {
        let a = path("a", "x", &[Chain::Base, Chain::Ethereum, Chain::Base], 0, 1, 1);
        let report = summarize(&[a.clone(), a]);
        assert_eq!(report.overlapping_paths, vec![(0, 1)]);
    }

    #[test]
    fn empty_summary() {
        let report = summarize(&[]);
        assert_eq!(report.total_paths, 0);
        assert_eq!(report.min_profit_usd, None);
        assert!(report.by_hops.is_empty());
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &report).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "chain_path,duration_secs,tokens,profit_usd,hops,actor,first_hash\n");
    }

    #[test]
    fn display_rounding() {
        assert_eq!(display_seconds(434.125), "434.1");
        assert_eq!(display_seconds(696.5), "696.5");
    }
}
