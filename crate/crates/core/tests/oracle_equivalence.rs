use hopscan::ingest::TokenEquivalenceMap;
use hopscan::pathfinder::{brute_force_find, compare_results, find_paths};
use hopscan::synth::{gen_adversarial, gen_noise, golden_table1, NoiseConfig};
use hopscan::{prepare, Chain, DetectionConfig, TransactionRecord, ValueTolerance};
use proptest::prelude::*;

fn assert_equivalent(records: Vec<TransactionRecord>, cfg: &DetectionConfig) -> usize {
    let index = prepare(records, &TokenEquivalenceMap::builtin());
    let fast = find_paths(&index, cfg);
    let slow = brute_force_find(index.records(), cfg).unwrap();
    let diff = compare_results(&fast, &slow);
    assert!(diff.is_empty(), "indexed vs brute force: {diff:?}");
    // Same order as well as the same set.
    let key = |p: &hopscan::ArbitragePath| p.hash_sequence().join(",");
    assert_eq!(fast.iter().map(key).collect::<Vec<_>>(), slow.iter().map(key).collect::<Vec<_>>());
    fast.len()
}

fn config_strategy() -> impl Strategy<Value = DetectionConfig> {
    (prop_oneof![Just(300i64), 1i64..600], prop_oneof![Just(980_000u32), 900_000u32..=1_000_000], 2usize..5, 0usize..4)
        .prop_map(|(w, ppm, min, extra)| {
            DetectionConfig::default()
                .with_window_secs(w)
                .unwrap()
                .with_value_tolerance(ValueTolerance::from_ppm(ppm).unwrap())
                .with_hops(min, min + extra)
                .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn adversarial_default_config(seed in any::<u64>(), n in 20usize..400) {
        let cfg = DetectionConfig::default();
        assert_equivalent(gen_adversarial(n, seed, &cfg), &cfg);
    }

    #[test]
    fn adversarial_any_config(seed in any::<u64>(), n in 20usize..300, cfg in config_strategy()) {
        assert_equivalent(gen_adversarial(n, seed, &cfg), &cfg);
    }

    #[test]
    fn dense_noise(seed in any::<u64>(), n in 0usize..800) {
        let mut noise = NoiseConfig::new(n, seed);
        noise.actors = 6;
        noise.chains = vec![Chain::Base, Chain::Ethereum, Chain::Optimism];
        noise.tokens = vec!["USDC".into(), "WETH".into()];
        noise.span_secs = 3_000;
        assert_equivalent(gen_noise(&noise), &DetectionConfig::default());
    }
}

#[test]
fn adversarial_data_produces_paths() {
    // Guard against a generator too weak to exercise the search.
    let cfg = DetectionConfig::default();
    let total: usize = (0..20).map(|s| assert_equivalent(gen_adversarial(300, s, &cfg), &cfg)).sum();
    eprintln!("{total} paths over 20 seeds");
    assert!(total > 20, "only {total} paths over 20 seeds");
}

#[test]
fn golden_subset() {
    let g = golden_table1();
    let planted: std::collections::HashSet<&str> =
        g.planted.iter().flat_map(|p| p.hashes.iter().map(String::as_str)).collect();
    let mut subset: Vec<TransactionRecord> =
        g.records.iter().filter(|r| planted.contains(r.hash())).cloned().collect();
    subset.extend(g.records.iter().filter(|r| !planted.contains(r.hash())).take(2_000 - subset.len()).cloned());
    assert_eq!(subset.len(), 2_000);
    assert_eq!(assert_equivalent(subset, &DetectionConfig::default()), 10);
}
