//! Detection on the reconstructed reference dataset, checked against the
//! published table values typed in by hand.

use std::collections::BTreeMap;

use hopscan::analytics::{display_seconds, summarize, SummaryReport};
use hopscan::ingest::TokenEquivalenceMap;
use hopscan::pathfinder::find_paths;
use hopscan::synth::{golden_table1, FOUR_HOP_ACTOR};
use hopscan::{prepare, Chain, DetectionConfig, Usd};

/// (route, duration, profit in cents)
const THREE_HOP: [(&str, i64, i64); 8] = [
    ("Base→Eth→Base", 646, 3278),
    ("Base→Opt→Base", 490, 43),
    ("Arb→Opt→Base", 311, -25_507),
    ("Opt→Base→Arb", 466, 26_404),
    ("Base→Avax→Base", 448, 2140),
    ("Arb→Poly→Arb", 412, -17),
    ("Blast→Arb→Eth", 458, -817),
    ("Poly→Arb→Poly", 242, -2),
];

const FOUR_HOP: [(&str, i64, i64); 2] = [("Opt→Base→Opt→Base", 776, 2069), ("Arb→Opt→Base→Arb", 617, 161)];

fn detected() -> SummaryReport {
    let g = golden_table1();
    let index = prepare(g.records, &TokenEquivalenceMap::builtin());
    summarize(&find_paths(&index, &DetectionConfig::default()))
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

#[test]
fn rows_match_the_table() {
    let report = detected();
    assert_eq!(report.total_paths, 10);
    assert_eq!(report.hop_histogram(), vec![(3, 8), (4, 2)]);

    let got: Vec<(String, i64, i64)> = report
        .rows
        .iter()
        .map(|r| (r.chain_path.clone(), r.duration_secs, r.profit_usd.micros() / 10_000))
        .collect();
    let want: Vec<(String, i64, i64)> = THREE_HOP
        .iter()
        .chain(&FOUR_HOP)
        .map(|&(c, d, p)| (c.to_string(), d, p))
        .collect();
    assert_eq!(sorted(&got), sorted(&want));
    for r in &report.rows {
        assert_eq!(r.profit_usd.micros() % 10_000, 0, "profit is a whole number of cents");
    }
}

#[test]
fn aggregates() {
    let report = detected();
    let three: Vec<i64> = THREE_HOP.iter().map(|r| r.1).collect();
    let mean3 = three.iter().sum::<i64>() as f64 / three.len() as f64;
    let mean4 = FOUR_HOP.iter().map(|r| r.1).sum::<i64>() as f64 / 2.0;

    let l3 = report.hop_level(3).unwrap();
    let l4 = report.hop_level(4).unwrap();
    assert_eq!(l3.mean_duration_secs, mean3);
    assert_eq!(display_seconds(l3.mean_duration_secs), "434.1");
    assert_eq!(l4.mean_duration_secs, mean4);
    assert_eq!(display_seconds(l4.mean_duration_secs), "696.5");

    let all: Vec<i64> = THREE_HOP.iter().chain(&FOUR_HOP).map(|r| r.2).collect();
    assert_eq!(report.positive_profit_count, all.iter().filter(|&&p| p > 0).count());
    assert_eq!(report.positive_profit_count, 6);
    assert_eq!(report.max_profit_usd, Some(Usd::from_cents(*all.iter().max().unwrap())));
    assert_eq!(report.min_profit_usd, Some(Usd::from_cents(-25_507)));
    assert_eq!(report.max_profit_usd, Some(Usd::from_cents(26_404)));
}

#[test]
fn chain_frequency_among_three_hops() {
    let report = detected();
    // Independent count straight from the route strings.
    let mut want: BTreeMap<Chain, usize> = BTreeMap::new();
    for (route, _, _) in THREE_HOP {
        let mut chains: Vec<Chain> = route
            .split('→')
            .map(|l| Chain::ALL.into_iter().find(|c| c.label() == l).unwrap())
            .collect();
        chains.sort();
        chains.dedup();
        for c in chains {
            *want.entry(c).or_default() += 1;
        }
    }
    let got = &report.hop_level(3).unwrap().chain_frequency;
    assert_eq!(got, &want);
    assert_eq!(got[&Chain::Base], 5);
    assert_eq!(got[&Chain::Optimism], 3);
    assert_eq!(got[&Chain::Arbitrum], 5);
}

#[test]
fn four_hops_share_an_actor() {
    let report = detected();
    assert_eq!(report.same_actor_clusters.len(), 1);
    let cluster = &report.same_actor_clusters[0];
    assert_eq!(cluster.actor, FOUR_HOP_ACTOR);
    assert!(cluster.rows.iter().all(|&i| report.rows[i].hops == 4));
    assert!(report.overlapping_paths.is_empty());
}

#[test]
fn matches_generator_expectation() {
    assert_eq!(detected(), golden_table1().expected);
}

#[test]
fn token_map_is_needed_for_one_route() {
    let g = golden_table1();
    let index = prepare(g.records, &TokenEquivalenceMap::new());
    let report = summarize(&find_paths(&index, &DetectionConfig::default()));
    assert_eq!(report.total_paths, 9);
    assert!(report.rows.iter().all(|r| r.chain_path != "Base→Avax→Base"));
}
